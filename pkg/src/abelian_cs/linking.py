"""Cycle classification, transverse intersection and rational linking numbers.

Cycles are dual walks; bounding chains are primal 2-chains.  A dual walk
meets the primal 2-skeleton only at face barycentres, so the intersection
of a primal 2-chain with a dual cycle is a plain signed crossing count.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chain_complex import ChainComplex, IntegerChain
from .exact_linalg import IntMatrix, solve_integer
from .manifold.triangulation import CycleError, DualCycle, Triangulation

TRIVIAL, TORSION, FREE = "trivial", "torsion", "free"


class LinkingError(ValueError):
    pass


class DisjointnessError(LinkingError):
    pass


class FreeCycleError(LinkingError):
    pass


class PushoffError(LinkingError):
    pass


@dataclass(frozen=True)
class CycleClass:
    """``kind`` with torsion ``degree`` p and a witness C with boundary p*z.

    Trivial cycles have degree 1; free cycles have degree 0 and no witness.
    """

    kind: str
    degree: int
    witness: IntegerChain | None

    def __post_init__(self) -> None:
        if self.kind == FREE:
            if self.degree != 0 or self.witness is not None:
                raise ValueError("free classes carry no degree or witness")
        elif self.kind == TRIVIAL:
            if self.degree != 1:
                raise ValueError("trivial classes have degree 1")
        elif self.kind == TORSION:
            if self.degree < 2:
                raise ValueError("torsion degree must be at least 2")
        else:
            raise ValueError(f"unknown cycle kind {self.kind!r}")

    def describe(self) -> str:
        return f"torsion({self.degree})" if self.kind == TORSION else self.kind


@dataclass(frozen=True)
class LinkingNumber:
    value: Fraction

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"


class _Context:
    """Per-manifold data reused across queries.

    One Smith decomposition ``U @ d2 @ V == D`` of the boundary into edges
    serves both jobs: ``d2 @ x == b`` is solvable exactly when ``U @ b`` is
    divisible by D entrywise, and the torsion rows of U are the class
    functionals on 1-chains.
    """

    def __init__(self, cx: ChainComplex):
        self.h1 = cx.homology(1)
        self._cx = weakref.ref(cx)
        self._ready = False

    def _prepare(self) -> None:
        if self._ready:
            return
        s = self._cx().smith(2)
        self.divisors = s.divisors
        self.n_faces = s.V.rows
        # column-major sparse copies: U by edge, V by diagonal position
        self._U_cols: list[dict[int, int]] = [{} for _ in range(s.U.cols)]
        for i in range(s.U.rows):
            for e, u in enumerate(s.U.row(i)):
                if u:
                    self._U_cols[e][i] = u
        self._V_cols = [{f: s.V[f, j] for f in range(s.V.rows) if s.V[f, j]}
                        for j in range(s.rank)]
        self._torsion = [(i, d) for i, d in enumerate(s.divisors) if d > 1]
        rows = {i for i, _ in self._torsion}
        self._T_cols = [{i: u for i, u in col.items() if i in rows} for col in self._U_cols]
        self._steps: dict[tuple[int, int], tuple[int, ...]] = {}
        self._ready = True

    def _transform(self, chain: IntegerChain) -> dict[int, int]:
        self._prepare()
        y: dict[int, int] = {}
        for e, c in chain.coefficients.items():
            for i, u in self._U_cols[e].items():
                y[i] = y.get(i, 0) + u * c
        return y

    def solve(self, chain: IntegerChain) -> IntegerChain | None:
        y = self._transform(chain)
        r = len(self.divisors)
        coeffs: dict[int, int] = {}
        for i, yi in y.items():
            if not yi:
                continue
            if i >= r:
                return None
            q, rem = divmod(yi, self.divisors[i])
            if rem:
                return None
            for f, v in self._V_cols[i].items():
                coeffs[f] = coeffs.get(f, 0) + v * q
        return IntegerChain(2, coeffs)

    @property
    def class_moduli(self) -> list[int]:
        self._prepare()
        return [d for _, d in self._torsion]

    def class_of(self, chain: IntegerChain) -> tuple[int, ...]:
        self._prepare()
        y: dict[int, int] = {}
        for e, c in chain.coefficients.items():
            for i, u in self._T_cols[e].items():
                y[i] = y.get(i, 0) + u * c
        return tuple(y.get(i, 0) % d for i, d in self._torsion)

    def step_class(self, tri: Triangulation, t: int, f: int) -> tuple[int, ...]:
        """Class functional of the primal path pushed off one dual step."""
        self._prepare()
        key = (t, f)
        if key not in self._steps:
            self._steps[key] = self.class_of(_step_chain(tri, t, f))
        return self._steps[key]


# keyed by the complex itself, which copies made by with_cycles share
_CONTEXTS: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def _ctx(tri: Triangulation) -> _Context:
    ctx = _CONTEXTS.get(tri.complex)
    if ctx is None:
        ctx = _CONTEXTS[tri.complex] = _Context(tri.complex)
    return ctx


def bounding_chain(tri: Triangulation, chain: IntegerChain) -> IntegerChain | None:
    """Primal 2-chain with the given boundary, if one exists."""
    if chain.degree != 1:
        raise LinkingError(f"bounding chains are sought for 1-chains, got degree {chain.degree}")
    return _ctx(tri).solve(chain)


def classify(z: DualCycle, tri: Triangulation) -> CycleClass:
    """Smallest p >= 1 with p*z bounding, searched up to the torsion exponent of H_1."""
    tri.validate_cycle(z)
    ctx = _ctx(tri)
    zp = tri.dual_to_primal(z)
    for p in range(1, ctx.h1.exponent + 1):
        C = bounding_chain(tri, p * zp)
        if C is not None:
            return CycleClass(TRIVIAL if p == 1 else TORSION, p, C)
    if ctx.h1.betti == 0:
        raise LinkingError("cycle failed to bound although H_1 is finite")
    return CycleClass(FREE, 0, None)


def intersection_number(C: IntegerChain, z: DualCycle, tri: Triangulation) -> int:
    """Signed count of crossings of ``z`` through the support of the 2-chain ``C``."""
    if C.degree != 2:
        raise LinkingError(f"intersection needs a 2-chain, got degree {C.degree}")
    return sum(C[f] * n for f, n in tri.crossings(z).items())


def check_disjoint(cycles: Sequence[DualCycle]) -> None:
    for a in range(len(cycles)):
        for b in range(a + 1, len(cycles)):
            shared = set(cycles[a].tetrahedra) & set(cycles[b].tetrahedra)
            if shared:
                na, nb = cycles[a].name or f"#{a}", cycles[b].name or f"#{b}"
                raise DisjointnessError(
                    f"cycles {na} and {nb} are not disjoint: shared tetrahedra {sorted(shared)}")


def verify_witness(tri: Triangulation, z: DualCycle, C: IntegerChain, degree: int) -> None:
    if tri.complex.boundary(C) != degree * tri.dual_to_primal(z):
        raise LinkingError(f"supplied chain does not bound {degree} times {z.name or 'the cycle'}")


def linking_number(
    z1: DualCycle,
    z2: DualCycle,
    tri: Triangulation,
    witness: IntegerChain | None = None,
    degree: int | None = None,
) -> LinkingNumber:
    """(C . z2) / p where C bounds p*z1 (the first argument is the one resolved).

    An explicit ``witness`` with its ``degree`` replaces the computed one and
    is checked before use.
    """
    check_disjoint([z1, z2])
    if witness is None:
        c1 = classify(z1, tri)
        if c1.kind == FREE:
            raise FreeCycleError(f"{z1.name or 'first cycle'} is free in H_1")
        witness, degree = c1.witness, c1.degree
    else:
        if degree is None or degree < 1:
            raise LinkingError("an explicit witness needs its degree")
        verify_witness(tri, z1, witness, degree)
    if classify(z2, tri).kind == FREE:
        raise FreeCycleError(f"{z2.name or 'second cycle'} is free in H_1")
    return LinkingNumber(Fraction(intersection_number(witness, z2, tri), degree))


@dataclass(frozen=True)
class FramedCycle:
    """A cycle with an explicit disjoint, homologous pushoff."""

    cycle: DualCycle
    pushoff: DualCycle
    manifold: Triangulation

    def __post_init__(self) -> None:
        self.manifold.validate_cycle(self.cycle)
        self.manifold.validate_cycle(self.pushoff)
        check_disjoint([self.cycle, self.pushoff])
        diff = self.manifold.dual_to_primal(self.cycle) - self.manifold.dual_to_primal(self.pushoff)
        if bounding_chain(self.manifold, diff) is None:
            raise LinkingError(
                f"pushoff {self.pushoff.name or ''} is not homologous to {self.cycle.name or 'cycle'}")

    @property
    def name(self) -> str:
        return self.cycle.name


def self_linking(fz: FramedCycle, witness: IntegerChain | None = None,
                 degree: int | None = None) -> LinkingNumber:
    return linking_number(fz.cycle, fz.pushoff, fz.manifold, witness, degree)


# -- pushoffs ------------------------------------------------------------


def _step_chain(tri: Triangulation, t: int, f: int) -> IntegerChain:
    return tri.dual_to_primal(DualCycle(((t, f, tri.crossing_sign(t, f)),)))


def _reverse(seq: Sequence[int]) -> list[int]:
    return [seq[0]] + list(reversed(seq[1:]))


def _neighbourhood(tri: Triangulation, z: DualCycle, blocked: set[int], rings: int) -> dict[int, int]:
    """Tetrahedra within ``rings`` vertex-steps of z, mapped to a position along z."""
    tets = tri.tetrahedra
    pos: dict[int, int] = {}
    score: dict[int, int] = {}
    frontier = {k: set(tets[t]) for k, t in enumerate(z.tetrahedra)}
    for _ in range(rings):
        by_vertex: dict[int, list[int]] = {}
        for k, verts in frontier.items():
            for v in verts:
                by_vertex.setdefault(v, []).append(k)
        for s, tv in enumerate(tets):
            if s in blocked or s in pos:
                continue
            hits: dict[int, int] = {}
            for v in tv:
                for k in by_vertex.get(v, ()):
                    hits[k] = hits.get(k, 0) + 1
            if hits:
                k = min(hits, key=lambda k: (-hits[k], k))
                pos[s], score[s] = k, hits[k]
        frontier = {}
        for s, k in pos.items():
            frontier.setdefault(k, set()).update(tets[s])
    return pos


def _parallel_walk(tri: Triangulation, z: DualCycle, blocked: set[int],
                   target_class: tuple[int, ...]) -> list[int] | None:
    ctx = _ctx(tri)
    L = len(z)
    for rings in (1, 2):
        pos = _neighbourhood(tri, z, blocked, rings)
        for start in sorted(pos):
            origin = (start, 0, tuple(0 for _ in target_class))
            prev = {origin: None}
            queue = deque([origin])
            found = None
            while queue and found is None:
                state = queue.popleft()
                t, prog, cls = state
                for nb, f in tri.dual_adjacency[t]:
                    if nb not in pos:
                        continue
                    d = (pos[nb] - pos[t]) % L
                    if d > L // 2:
                        d -= L
                    sc = ctx.step_class(tri, t, f)
                    ncls = tuple((a + b) % dv for a, b, dv in zip(cls, sc, ctx.class_moduli))
                    nxt = (nb, prog + d, ncls)
                    if abs(nxt[1]) > 2 * L or nxt in prev:
                        continue
                    prev[nxt] = state
                    if nb == start and nxt[1] == L and ncls == target_class:
                        found = nxt
                        break
                    queue.append(nxt)
            if found is None:
                continue
            path = []
            s = prev[found]
            while s is not None:
                path.append(s[0])
                s = prev[s]
            path.reverse()
            if len(set(path)) == len(path):
                return path
    return None


def _meridian(tri: Triangulation, root: int, blocked: set[int], C: IntegerChain,
              degree: int) -> list[int] | None:
    """Null-homologous closed walk at ``root`` avoiding ``blocked`` with C-crossing = degree."""
    ctx = _ctx(tri)
    parent: dict[int, int | None] = {root: None}
    order = [root]
    queue = deque([root])
    non_tree: list[tuple[int, int]] = []
    while queue:
        t = queue.popleft()
        for nb, f in tri.dual_adjacency[t]:
            if nb in blocked:
                continue
            if nb not in parent:
                parent[nb] = t
                order.append(nb)
                queue.append(nb)
            elif parent[t] != nb and t < nb:
                non_tree.append((t, nb))

    def path_to(t: int) -> list[int]:
        out = []
        while t is not None:
            out.append(t)
            t = parent[t]
        return out[::-1]

    mods = ctx.class_moduli

    def step(a: int, b: int) -> tuple[int, tuple[int, ...]]:
        f = tri.shared_face(a, b)
        cross = C[tri.tet_faces[a][f]] * tri.crossing_sign(a, f)
        return cross, ctx.step_class(tri, a, f)

    # values along tree paths from the root; a loop's value is pot(u) + step - pot(v)
    pot: dict[int, tuple[int, tuple[int, ...]]] = {root: (0, tuple(0 for _ in mods))}
    for t in order[1:]:
        pc, pk = pot[parent[t]]
        sc, sk = step(parent[t], t)
        pot[t] = (pc + sc, tuple((a + b) % d for a, b, d in zip(pk, sk, mods)))
    candidates = []
    for u, v in non_tree:
        sc, sk = step(u, v)
        cross = pot[u][0] + sc - pot[v][0]
        cls = tuple((a + b - c) % d for a, b, c, d in zip(pot[u][1], sk, pot[v][1], mods))
        candidates.append((u, v, cross, cls))
    loops = [path_to(u) + path_to(v)[::-1][:-1] for u, v, _, _ in candidates]
    values = [(cross, cls) for _, _, cross, cls in candidates]
    order_by_len = sorted(range(len(loops)), key=lambda k: len(loops[k]))
    loops = [loops[k] for k in order_by_len]
    values = [values[k] for k in order_by_len]
    zero = tuple(0 for _ in mods)
    for seq, (cross, cls) in zip(loops, values):
        if cls == zero and abs(cross) == degree:
            return seq if cross == degree else _reverse(seq)
    for size in (8, 32, len(loops)):
        sub = values[:size]
        if not sub:
            break
        nt = len(mods)
        rows = [[cross for cross, _ in sub] + [0] * nt]
        for i, d in enumerate(mods):
            rows.append([cls[i] for _, cls in sub] + [d if j == i else 0 for j in range(nt)])
        A = IntMatrix.from_rows(rows, len(sub) + nt)
        x = solve_integer(A, [degree] + [0] * nt)
        if x is None:
            continue
        seq = [root]
        for coeff, loop in zip(x, loops[:size]):
            piece = loop if coeff > 0 else _reverse(loop)
            for _ in range(abs(coeff)):
                seq += piece[1:] + [root]
            # every piece returns to the root; drop the duplicate root markers
        walk = [seq[0]]
        for t in seq[1:]:
            if t != walk[-1]:
                walk.append(t)
        if walk[-1] == root and len(walk) > 1:
            walk.pop()
        return walk
    return None


def default_pushoff(
    z: DualCycle,
    tri: Triangulation,
    twist: int = 0,
    avoid: Iterable[DualCycle] = (),
) -> DualCycle:
    """Disjoint walk parallel to ``z`` and homologous to it.

    The untwisted walk winds once along z through tetrahedra sharing a vertex
    with it; each unit of ``twist`` splices in one null-homologous loop that
    links z once, so the self-linking moves by exactly ``twist``.
    """
    tri.validate_cycle(z)
    if not z.is_simple():
        raise PushoffError(f"{z.name or 'cycle'} revisits a tetrahedron")
    cls = classify(z, tri)
    if cls.kind == FREE:
        raise FreeCycleError(f"{z.name or 'cycle'} is free in H_1")
    blocked = set(z.tetrahedra)
    for w in avoid:
        blocked.update(w.tetrahedra)
    ctx = _ctx(tri)
    target = ctx.class_of(tri.dual_to_primal(z))
    base = _parallel_walk(tri, z, blocked, target)
    if base is None:
        raise PushoffError(f"no disjoint parallel route for {z.name or 'cycle'}; subdivide")
    seq = list(base)
    if twist:
        loop = _meridian(tri, base[0], blocked, cls.witness, cls.degree)
        if loop is None:
            raise PushoffError(f"no linking loop around {z.name or 'cycle'}; subdivide")
        if twist < 0:
            loop = _reverse(loop)
        for _ in range(abs(twist)):
            seq += loop
        seq = [t for k, t in enumerate(seq) if k == 0 or t != seq[k - 1]]
    name = f"{z.name}_push" if z.name else ""
    try:
        return tri.walk(seq, name)
    except CycleError as exc:  # pragma: no cover - construction bug
        raise PushoffError(str(exc)) from exc


def framed(z: DualCycle, tri: Triangulation, twist: int = 0,
           avoid: Iterable[DualCycle] = ()) -> FramedCycle:
    return FramedCycle(z, default_pushoff(z, tri, twist, avoid), tri)
