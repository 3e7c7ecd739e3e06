import pytest

from abelian_cs.linking import FramedCycle
from abelian_cs.manifold import build_lens, build_rp3, build_s3, build_s3_heegaard


@pytest.fixture(scope="session")
def rp3():
    return build_rp3()


@pytest.fixture(scope="session")
def s3():
    return build_s3()


@pytest.fixture(scope="session")
def s3h():
    return build_s3_heegaard()


@pytest.fixture(scope="session")
def lens3():
    return build_lens(3)


@pytest.fixture(scope="session")
def framed_tau1(rp3):
    d = rp3.designated
    return FramedCycle(d["tau1"], d["tau1_push"], rp3)


@pytest.fixture(scope="session")
def framed_triv(s3h):
    d = s3h.designated
    return FramedCycle(d["triv"], d["triv_push"], s3h)


@pytest.fixture(scope="session")
def s2xs1():
    """S^2 x S^1: boundary of a tetrahedron times a 3-cycle, prisms split by the staircase rule."""
    from abelian_cs.manifold.builders import _orient
    from abelian_cs.manifold import Triangulation

    n = 3
    vid = lambda v, j: 4 * (j % n) + v  # noqa: E731
    tets = []
    for tri in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        a, b, c = tri
        for j in range(n):
            tets += [[vid(a, j), vid(b, j), vid(c, j), vid(c, j + 1)],
                     [vid(a, j), vid(b, j), vid(b, j + 1), vid(c, j + 1)],
                     [vid(a, j), vid(a, j + 1), vid(b, j + 1), vid(c, j + 1)]]
    _orient(tets)
    return Triangulation(4 * n, tets, "s2xs1")
