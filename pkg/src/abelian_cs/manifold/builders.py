"""Shipped manifold models.

Lens spaces L(p, 1) come from the genus-one Heegaard splitting of S^3.  S^3
is triangulated as the boundary of a product of two polygons, each polygon
coned to a centre vertex; that is the union of two solid tori

    V1 = C_m x cone(C_n)      (prisms edge x triangle)
    V2 = cone(C_m) x C_n      (prisms triangle x edge)

with every prism split by the staircase rule.  The rotation
(i, j) -> (i + M, j + q N) of the grid is a free simplicial action of Z/p;
with M, N >= 3 no vertex is within distance two of its translates, so the
quotient is again a simplicial complex, and it is L(p, q).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

from .triangulation import (
    CycleError,
    DualCycle,
    Triangulation,
    ValidationError,
    _face_of,
    _perm_parity,
    triangulation_from_json,
)

LENS_RANGE = range(2, 9)

_PRISM_V1 = ((0, 0), (1, 0), (1, 1), (1, 2)), ((0, 0), (0, 1), (1, 1), (1, 2)), \
    ((0, 0), (0, 1), (0, 2), (1, 2))
_PRISM_V2 = ((0, 0), (1, 0), (2, 0), (2, 1)), ((0, 0), (1, 0), (1, 1), (2, 1)), \
    ((0, 0), (0, 1), (1, 1), (2, 1))


def build_s3() -> Triangulation:
    """Boundary of the 4-simplex."""
    tets = []
    for i in range(5):
        rest = [v for v in range(5) if v != i]
        if i % 2:
            rest[0], rest[1] = rest[1], rest[0]
        tets.append(rest)
    return Triangulation(5, tets, "s3")


@dataclass
class HeegaardModel:
    """Quotient triangulation plus the bookkeeping used to find cycles on it."""

    triangulation: Triangulation
    p: int
    m: int
    n: int
    M: int
    N: int
    solid_torus: tuple[int, ...]
    # prism coordinate displacement of each dual step, indexed [tet][local face]
    displacement: tuple[tuple[tuple[int, int], ...], ...]


def _wrap(d: int, period: int) -> int:
    d %= period
    return d - period if d > period // 2 else d


def _orient(tets: list[list]) -> None:
    """Flip tetrahedra in place so neighbours induce opposite face orientations."""
    faces: dict[frozenset, list[tuple[int, int]]] = {}
    for k, t in enumerate(tets):
        for i in range(4):
            faces.setdefault(frozenset(x for j, x in enumerate(t) if j != i), []).append((k, i))
    adj: list[list[tuple[int, int, int]]] = [[] for _ in tets]
    for pair in faces.values():
        (a, ia), (b, ib) = pair
        adj[a].append((b, ia, ib))
        adj[b].append((a, ib, ia))
    sign = [0] * len(tets)
    sign[0] = 1
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, ia, ib in adj[a]:
            # parity of b's induced face relative to a's, before any flips
            rel = _perm_parity(_face_of(tets[b], ib), _face_of(tets[a], ia))
            want = -rel * sign[a]
            if not sign[b]:
                sign[b] = want
                queue.append(b)
            elif sign[b] != want:
                raise ValidationError("cover triangulation is not orientable")
    for k, s in enumerate(sign):
        if s < 0:
            tets[k][2], tets[k][3] = tets[k][3], tets[k][2]


def heegaard_lens(p: int, q: int = 1, M: int = 3, N: int = 3, name: str | None = None) -> HeegaardModel:
    """L(p, q) as a quotient of the Heegaard-torus triangulation of S^3.

    ``p = 1`` returns that S^3 itself.
    """
    m, n = p * M, p * N
    cover: list[list] = []
    meta: list[tuple[int, int, int]] = []
    for i in range(m):
        for j in range(n):
            for path in _PRISM_V1:
                verts = []
                for a, b in path:
                    ii = (i + a) % m
                    verts.append(("c", ii) if b == 0 else ("g", ii, (j + b - 1) % n))
                cover.append(verts)
                meta.append((1, i, j))
    for i in range(m):
        for j in range(n):
            for path in _PRISM_V2:
                verts = []
                for a, b in path:
                    jj = (j + b) % n
                    verts.append(("d", jj) if a == 0 else ("g", (i + a - 1) % m, jj))
                cover.append(verts)
                meta.append((2, i, j))
    _orient(cover)

    def act(v: tuple, r: int = 1) -> tuple:
        if v[0] == "g":
            return ("g", (v[1] + r * M) % m, (v[2] + r * q * N) % n)
        if v[0] == "c":
            return ("c", (v[1] + r * M) % m)
        return ("d", (v[1] + r * q * N) % n)

    orbit_rep = {}
    for t in cover:
        for v in t:
            if v not in orbit_rep:
                orbit_rep[v] = min(act(v, r) for r in range(p))
    reps = sorted(set(orbit_rep.values()))
    vindex = {v: k for k, v in enumerate(reps)}

    by_set = {frozenset(t): k for k, t in enumerate(cover)}
    quotient: list[tuple[int, ...]] = []
    rep_of: list[int] = []
    owner: dict[int, int] = {}
    for k, t in enumerate(cover):
        if k in owner:
            continue
        qt = tuple(vindex[orbit_rep[v]] for v in t)
        for r in range(p):
            image = [act(v, r) for v in t]
            kk = by_set[frozenset(image)]
            if _perm_parity(image, cover[kk]) != 1:
                raise ValidationError("deck transformation reverses orientation")
            owner[kk] = len(quotient)
        quotient.append(qt)
        rep_of.append(k)
    if len({frozenset(t) for t in quotient}) != len(quotient):
        raise ValidationError("quotient is not a simplicial complex")

    label = name if name is not None else ("s3-heegaard" if p == 1 else f"lens-{p}")
    tri = Triangulation(len(reps), quotient, label)

    cover_faces: dict[frozenset, list[int]] = {}
    for k, t in enumerate(cover):
        for i in range(4):
            cover_faces.setdefault(frozenset(x for j, x in enumerate(t) if j != i), []).append(k)
    disp = []
    for qk, ck in enumerate(rep_of):
        t = cover[ck]
        row = []
        for i in range(4):
            a, b = cover_faces[frozenset(x for j, x in enumerate(t) if j != i)]
            other = b if a == ck else a
            _, i0, j0 = meta[ck]
            _, i1, j1 = meta[other]
            row.append((_wrap(i1 - i0, m), _wrap(j1 - j0, n)))
        disp.append(tuple(row))
    return HeegaardModel(tri, p, m, n, M, N, tuple(meta[k][0] for k in rep_of), tuple(disp))


def shortest_winding_walk(
    model: HeegaardModel,
    allowed: Callable[[int], bool],
    target: Callable[[int, int], bool],
    weight: Callable[[int, int], tuple[int, int]],
    bound: int,
) -> list[int] | None:
    """Shortest closed walk in allowed tetrahedra with prescribed total winding.

    Breadth-first search on (tetrahedron, winding) states; ``weight`` projects
    the prism displacement of a step onto the tracked winding coordinates.
    Starts are tried in index order and the first simple walk is returned.
    """
    tri = model.triangulation
    for start in range(len(tri.tetrahedra)):
        if not allowed(start):
            continue
        origin = (start, 0, 0)
        prev = {origin: None}
        queue = deque([origin])
        found = None
        while queue and found is None:
            state = queue.popleft()
            t, wa, wb = state
            for nb, i in tri.dual_adjacency[t]:
                if not allowed(nb):
                    continue
                da, db = weight(*model.displacement[t][i])
                nxt = (nb, wa + da, wb + db)
                if abs(nxt[1]) > bound or abs(nxt[2]) > bound or nxt in prev:
                    continue
                prev[nxt] = state
                if nb == start and target(nxt[1], nxt[2]):
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


def _core_cycles(model: HeegaardModel) -> dict[str, DualCycle]:
    tri = model.triangulation
    M, N, m, n = model.M, model.N, model.m, model.n
    bound = 2 * max(m, n)
    in_v1 = lambda t: model.solid_torus[t] == 1  # noqa: E731
    in_v2 = lambda t: model.solid_torus[t] == 2  # noqa: E731
    core1 = shortest_winding_walk(model, in_v1, lambda a, b: a == M, lambda di, dj: (di, 0), bound)
    core2 = shortest_winding_walk(model, in_v2, lambda a, b: a == N, lambda di, dj: (dj, 0), bound)
    if core1 is None or core2 is None:
        raise CycleError("failed to locate core cycles on the Heegaard model")
    tau1, tau2 = tri.walk(core1, "tau1"), tri.walk(core2, "tau2")
    return {"tau1": tau1, "tau2": tau2, "triv": _small_meridian(tri, tau1, tau2)}


def _small_meridian(tri: Triangulation, tau1: DualCycle, tau2: DualCycle) -> DualCycle:
    """Shortest simple null-homologous loop off both cores that links ``tau2`` once."""
    from ..linking import _meridian, classify  # late import: linking depends on this package

    cls = classify(tau2, tri)
    blocked = set(tau1.tetrahedra) | set(tau2.tetrahedra)
    best = None
    roots = sorted({nb for t in tau2.tetrahedra for nb, _ in tri.dual_adjacency[t]} - blocked)
    for root in roots:
        loop = _meridian(tri, root, blocked, cls.witness, cls.degree)
        if loop is not None and len(set(loop)) == len(loop) and (best is None or len(loop) < len(best)):
            best = loop
    if best is None:
        raise CycleError("failed to locate a meridian on the Heegaard model")
    return tri.walk(best, "triv")


def with_pushoffs(tri: Triangulation, names: Sequence[str]) -> Triangulation:
    """Add ``<name>_push`` framings, each disjoint from every other designated cycle."""
    from ..linking import default_pushoff

    extra: dict[str, DualCycle] = {}
    for name in names:
        others = [c for k, c in tri.designated.items() if k != name] + list(extra.values())
        extra[f"{name}_push"] = default_pushoff(tri.designated[name], tri, 0, avoid=others)
    return tri.with_cycles(extra)


@lru_cache(maxsize=None)
def _lens_model(p: int) -> HeegaardModel:
    return heegaard_lens(p)


def build_lens(p: int) -> Triangulation:
    """L(p, 1) with designated cycles ``tau1`` and ``tau2`` (cores of the two
    Heegaard solid tori, both generating H_1 = Z/p) and ``triv`` (a meridian
    of the second solid torus, null-homologous)."""
    if p not in LENS_RANGE:
        raise ValueError(f"lens parameter p={p} outside {LENS_RANGE.start}..{LENS_RANGE.stop - 1}")
    model = _lens_model(p)
    return model.triangulation.with_cycles(_core_cycles(model))


@lru_cache(maxsize=None)
def build_s3_heegaard() -> Triangulation:
    """S^3 on the Heegaard torus; ``hopf_a``/``hopf_b`` are the two cores (a Hopf link),
    shipped with pushoffs."""
    model = heegaard_lens(1)
    cores = _core_cycles(model)
    tri = model.triangulation.with_cycles(
        {"hopf_a": cores["tau1"].renamed("hopf_a"),
         "hopf_b": cores["tau2"].renamed("hopf_b"),
         "triv": cores["triv"]})
    return with_pushoffs(tri, ("hopf_a", "hopf_b", "triv"))


def build_rp3() -> Triangulation:
    """RP^3 from the embedded data table (validated on load)."""
    text = resources.files("abelian_cs.data").joinpath("rp3.json").read_text(encoding="utf-8")
    tri = triangulation_from_json(json.loads(text))
    h = tri.complex
    groups = [h.homology(k) for k in range(4)]
    if [(g.betti, g.torsion) for g in groups] != [(1, ()), (0, (2,)), (0, ()), (1, ())]:
        raise ValidationError(f"embedded RP^3 data has homology {[str(g) for g in groups]}")
    return tri


BUILTIN_NAMES = ("s3", "s3-heegaard", "rp3") + tuple(f"lens-{p}" for p in LENS_RANGE)


def builtin(name: str) -> Triangulation:
    if name == "s3":
        return build_s3()
    if name == "s3-heegaard":
        return build_s3_heegaard()
    if name == "rp3":
        return build_rp3()
    if name.startswith("lens-"):
        try:
            p = int(name[5:])
        except ValueError:
            p = -1
        if p in LENS_RANGE:
            return build_lens(p)
    raise KeyError(f"unknown builtin manifold {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
