"""Brute-force oracles for the test suite.

Nothing here is used by the library itself.  Each oracle is written for
obviousness and recomputes what it needs from raw data.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from fractions import Fraction
from typing import Sequence

from .chain_complex import IntegerChain
from .exact_linalg import IntMatrix
from .manifold.triangulation import DualCycle, Triangulation

SEARCH_LIMIT = 10 ** 7


def rank_oracle(A: IntMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(A.row(i)) for i in range(A.rows)]
    rank, prev = 0, 1
    for col in range(A.cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, len(m)):
            for c in range(col + 1, A.cols):
                num = m[rank][col] * m[r][c] - m[r][col] * m[rank][c]
                m[r][c] = num // prev  # exact by Sylvester's identity
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
    return rank


def rank_mod_prime(A: IntMatrix, q: int) -> int:
    m = [[x % q for x in A.row(i)] for i in range(A.rows)]
    rank = 0
    for col in range(A.cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, q)
        m[rank] = [x * inv % q for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rational_rank(A: IntMatrix) -> int:
    """Plain Gaussian elimination over Fractions (a second, slower route)."""
    m = [[Fraction(x) for x in A.row(i)] for i in range(A.rows)]
    rank = 0
    for col in range(A.cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][col] / m[rank][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def bounded_solution_search(A: IntMatrix, b: Sequence[int], bound: int) -> list[int] | None:
    """First x in the box [-bound, bound]^cols (lexicographic) with A x = b."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    size = (2 * bound + 1) ** A.cols
    if size > SEARCH_LIMIT:
        raise ValueError(f"search box has {size} candidates, above {SEARCH_LIMIT}")
    rows = [A.row(i) for i in range(A.rows)]
    for x in itertools.product(range(-bound, bound + 1), repeat=A.cols):
        if all(sum(a * v for a, v in zip(r, x)) == bi for r, bi in zip(rows, b)):
            return list(x)
    return None


def crossing_count_oracle(C: IntegerChain, z: DualCycle, tri: Triangulation) -> int:
    """Walk every face of the complex and count the signed passes of z through it.

    Signs are rederived from the raw tetrahedra: a face oriented as the
    boundary of the tetrahedron listed first around it is crossed positively
    when the walk leaves that tetrahedron.
    """
    tets = tri.tetrahedra
    owners: dict[frozenset, list[int]] = {}
    for k, t in enumerate(tets):
        for v in t:
            owners.setdefault(frozenset(t) - {v}, []).append(k)
    total = 0
    for fi, face in enumerate(tri.faces):
        a, b = owners[frozenset(face)]
        first = a if _induces(tets[a], face) else b
        passes = 0
        steps = z.steps
        for n, (t, i, _sign) in enumerate(steps):
            nxt = steps[(n + 1) % len(steps)][0]
            if set(x for j, x in enumerate(tets[t]) if j != i) != set(face):
                continue
            if t == first:
                passes += 1
            elif nxt == first:
                passes -= 1
        total += C[fi] * passes
    return total


def _induces(tet: Sequence[int], face: Sequence[int]) -> bool:
    """True when the oriented face appears with its stored order in the boundary of tet."""
    (missing,) = [v for v in tet if v not in face]
    i = list(tet).index(missing)
    rest = [v for v in tet if v != missing]
    # boundary term (-1)^i [..without i..]; compare with face as a permutation
    perm = [rest.index(v) for v in face]
    inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    return (i + inversions) % 2 == 0


def random_simple_cycle(tri: Triangulation, rng: random.Random, block: float = 0.3,
                        attempts: int = 100) -> DualCycle:
    """A random closed walk visiting no tetrahedron twice.

    Steps across a random face, then returns by a shortest path through a
    randomly thinned dual graph; thinning varies the length and route.
    """
    n = len(tri.tetrahedra)
    for _ in range(attempts):
        a = rng.randrange(n)
        b, _f = rng.choice(tri.dual_adjacency[a])
        allowed = {t for t in range(n) if rng.random() >= block} | {a, b}
        prev = {b: None}
        queue = deque([b])
        while queue and a not in prev:
            t = queue.popleft()
            nbs = list(tri.dual_adjacency[t])
            rng.shuffle(nbs)
            for nb, _ in nbs:
                if nb in allowed and nb not in prev and not (t == b and nb == a):
                    prev[nb] = t
                    queue.append(nb)
        if a not in prev:
            continue
        path, t = [], prev[a]
        while t is not None:
            path.append(t)
            t = prev[t]
        # path runs b ... back to the tetrahedron before a
        return tri.walk([a] + path[::-1])
    raise RuntimeError("no random cycle found")


def random_chain(tri: Triangulation, rng: random.Random, degree: int, size: int,
                 spread: int = 3) -> IntegerChain:
    cells = (tri.n_vertices, len(tri.edges), len(tri.faces), len(tri.tetrahedra))[degree]
    return IntegerChain(degree, {rng.randrange(cells): rng.randint(-spread, spread)
                                 for _ in range(size)})
