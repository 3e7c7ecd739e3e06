"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear inline) or
``python tests/test_acceptance.py`` for just the summary.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from abelian_cs.chain_complex import HomologyGroup
from abelian_cs.chern_simons import (
    ConstraintViolation,
    WilsonLink,
    check_charge,
    check_level,
    consistency_torsion_contains_trivial,
    evaluate,
)
from abelian_cs.exact_linalg import IntMatrix, PhaseModOne, smith_normal_form, solve_integer
from abelian_cs.linking import (
    FramedCycle,
    PushoffError,
    classify,
    framed,
    intersection_number,
    linking_number,
    self_linking,
)
from abelian_cs.manifold import BUILTIN_NAMES, build_lens, build_rp3, build_s3, build_s3_heegaard, builtin
from abelian_cs.manifold import builders
from abelian_cs.testkit import (
    bounded_solution_search,
    crossing_count_oracle,
    random_chain,
    random_simple_cycle,
    rank_oracle,
)


@pytest.fixture
def verdict(capsys):
    def report(n, title, check):
        try:
            detail = check()
            ok = True
        except AssertionError as exc:
            ok, detail = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return report


def _rp3_parts(tri, charges=(2, 2, 1)):
    d = tri.designated
    return [(FramedCycle(d[n], d[n + "_push"], tri), q) for n, q in zip(("tau1", "tau2", "triv"), charges)]


def criterion_1():
    start = time.perf_counter()
    builders._lens_model.cache_clear()
    rp3, s3 = build_rp3(), build_s3()
    assert rp3.complex.homology(1) == HomologyGroup(0, (2,))
    assert rp3.complex.homology(2) == HomologyGroup(0)
    assert s3.complex.homology(1).is_trivial() and s3.complex.homology(2).is_trivial()
    for p in (3, 4, 5):
        assert build_lens(p).complex.homology(1) == HomologyGroup(0, (p,))
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"took {elapsed:.2f} s"
    return f"{elapsed:.2f} s"


def criterion_2():
    start = time.perf_counter()
    tri = build_rp3()
    tau = tri.designated["tau1"]
    c = classify(tau, tri)
    assert (c.kind, c.degree) == ("torsion", 2)
    primal = tri.dual_to_primal(tau)
    assert tri.complex.boundary(c.witness) == 2 * primal
    d2 = tri.complex.boundary_matrix(2)
    assert solve_integer(d2, primal.to_vector(d2.rows)) is None
    elapsed = time.perf_counter() - start
    assert elapsed < 1, f"took {elapsed:.2f} s"
    return f"{elapsed:.2f} s"


def criterion_3():
    tri = build_rp3()
    d = tri.designated
    lk = linking_number(d["tau1"], d["tau2"], tri).value
    assert lk.denominator == 2, f"lk = {lk}"
    assert PhaseModOne(lk) == PhaseModOne(Fraction(1, 2))
    c = classify(d["tau1"], tri)
    rng = random.Random(30)
    for _ in range(20):
        other = c.witness + tri.complex.boundary(random_chain(tri, rng, 3, 15))
        assert linking_number(d["tau1"], d["tau2"], tri, other, 2).value == lk
    return f"lk = {lk}"


def criterion_4():
    tri = build_s3_heegaard()
    z = tri.designated["triv"]
    base = self_linking(framed(z, tri, 0)).value
    count = 0
    for n in range(-2, 3):
        fz = framed(z, tri, n - int(base))
        assert self_linking(fz).value == n
        for q in (1, 2, 3):
            for k in (2, 4):
                phase = evaluate(WilsonLink.of(tri, [(fz, q)]), k).phase
                assert phase == PhaseModOne(Fraction(-q * q * n, 4 * k)), (n, q, k, phase)
                count += 1
    assert count == 30
    return f"{count} combinations"


def criterion_5():
    tri = build_rp3()
    d = tri.designated
    fz = FramedCycle(d["tau1"], d["tau1_push"], tri)
    c = classify(fz.cycle, tri)
    I = intersection_number(c.witness, fz.pushoff, tri)
    for q in (2, 4):
        for k in (2, 4):
            phase = evaluate(WilsonLink.of(tri, [(fz, q)]), k).phase
            assert phase == PhaseModOne(Fraction(-q * q, 4 * k) * Fraction(I, 2)), (q, k, phase)
    return f"I = {I}"


def criterion_6():
    rp3, s3 = build_rp3(), build_s3()
    tau = classify(rp3.designated["tau1"], rp3)
    triv = classify(rp3.designated["triv"], rp3)
    cases = [
        (check_level(3, rp3), False),
        (check_level(4, rp3), True),
        (check_level(1, s3), True),
        (check_charge(1, tau, rp3), False),
        (check_charge(2, tau, rp3), True),
        (check_charge(3, triv, rp3), True),
    ]
    for result, expected in cases:
        assert bool(result) is expected, result.reason
    assert "k = 2l" in cases[0][0].reason and "q = 2m" in cases[3][0].reason
    fz = FramedCycle(rp3.designated["tau1"], rp3.designated["tau1_push"], rp3)
    for q, k, cited in ((2, 3, "k = 2l"), (1, 2, "q = 2m")):
        with pytest.raises(ConstraintViolation, match=cited):
            evaluate(WilsonLink.of(rp3, [(fz, q)]), k)
    return "6 cases"


def criterion_7():
    rng = random.Random(70)
    models = [build_s3_heegaard(), build_rp3(), build_lens(3)]
    done = 0
    while done < 50:
        tri = models[done % len(models)]
        z = random_simple_cycle(tri, rng)
        if classify(z, tri).kind != "trivial":
            continue
        try:
            fz = framed(z, tri, rng.randint(-2, 2))
        except PushoffError:
            continue
        q, k = rng.randint(-5, 5) or 1, rng.choice([1, 2, 3, 4, 6, -2])
        assert consistency_torsion_contains_trivial(fz, q, k), (tri.name, z.steps)
        done += 1
    return f"{done} framed cycles"


def criterion_8():
    tri = build_rp3()
    parts = _rp3_parts(tri)
    names = [f.cycle for f, _ in parts]
    classes = [classify(z, tri) for z in names]
    base_lk = {(i, j): linking_number(names[i], names[j], tri).value
               for i in range(3) for j in range(3) if i != j}
    base_sl = [self_linking(f).value for f, _ in parts]
    base_phase = {k: evaluate(WilsonLink.of(tri, parts), k).phase for k in (2, 4)}
    rng = random.Random(80)
    for _ in range(20):
        ws = [c.witness + tri.complex.boundary(random_chain(tri, rng, 3, rng.randint(1, 25)))
              for c in classes]
        for (i, j), v in base_lk.items():
            assert linking_number(names[i], names[j], tri, ws[i], classes[i].degree).value == v
        for i, (f, _) in enumerate(parts):
            assert self_linking(f, ws[i], classes[i].degree).value == base_sl[i]
        for k, ph in base_phase.items():
            assert evaluate(WilsonLink.of(tri, parts), k, ws).phase == ph
    return "20 substitutions"


def criterion_9():
    start = time.perf_counter()
    rng = random.Random(90)
    for _ in range(200):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        A = IntMatrix.from_rows([[rng.randint(-10, 10) for _ in range(n)] for _ in range(m)], n)
        s = smith_normal_form(A)
        assert s.U @ A @ s.V == s.D
        assert abs(s.U.determinant()) == 1 and abs(s.V.determinant()) == 1
        d = s.divisors
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        assert s.rank == rank_oracle(A)
    agree = 0
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)], n)
        if rng.random() < 0.5:
            b = list(A.apply([rng.randint(-3, 3) for _ in range(n)]))
        else:
            b = [rng.randint(-8, 8) for _ in range(m)]
        x = solve_integer(A, b)
        found = bounded_solution_search(A, b, 5)
        if x is not None:
            assert list(A.apply(x)) == b
        assert (found is None) or (x is not None)
        if x is None:
            assert found is None
        agree += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f} s"
    return f"200 SNF + {agree} solves, {elapsed:.1f} s"


def criterion_10():
    rng = random.Random(100)
    total = 0
    for name in BUILTIN_NAMES:
        tri = builtin(name)
        cycles = list(tri.designated.values())
        witnesses = [c.witness for c in map(lambda z: classify(z, tri), cycles) if c.witness is not None]
        for i in range(100):
            z = random_simple_cycle(tri, rng) if i % 4 or not cycles else rng.choice(cycles)
            if i % 3 == 0 and witnesses:
                C = rng.choice(witnesses) + random_chain(tri, rng, 2, 5)
            else:
                C = random_chain(tri, rng, 2, rng.randint(1, 60))
            assert intersection_number(C, z, tri) == crossing_count_oracle(C, z, tri), (name, i)
            total += 1
    return f"{total} pairs over {len(BUILTIN_NAMES)} models"


CRITERIA = [
    (1, "homology of RP^3, S^3 and L(p,1)", criterion_1),
    (2, "torsion generator of RP^3 has degree 2", criterion_2),
    (3, "half-integer torsion linking", criterion_3),
    (4, "trivial-cycle expectation", criterion_4),
    (5, "torsion-cycle expectation", criterion_5),
    (6, "level and charge constraints", criterion_6),
    (7, "degree-2 route contains degree-1 route", criterion_7),
    (8, "bounding-chain independence", criterion_8),
    (9, "exact linear algebra properties", criterion_9),
    (10, "intersection oracle agreement", criterion_10),
]


@pytest.mark.parametrize("n, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(verdict, n, title, check):
    verdict(n, title, check)


if __name__ == "__main__":
    failures = 0
    for n, title, check in CRITERIA:
        try:
            detail, ok = check(), True
        except AssertionError as exc:
            detail, ok = str(exc), False
        failures += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} ({detail})")
    sys.exit(1 if failures else 0)
