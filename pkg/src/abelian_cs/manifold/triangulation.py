"""Oriented simplicial 3-manifolds and walks in their dual 1-skeleton."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..chain_complex import ChainComplex, IntegerChain, chain_from_pairs
from ..exact_linalg import IntMatrix


class TriangulationError(ValueError):
    """Base class for rejected triangulation or cycle data."""


class ParseError(TriangulationError):
    pass


class ValidationError(TriangulationError):
    pass


class NonManifoldError(ValidationError):
    pass


class OrientationError(ValidationError):
    pass


class CycleError(ValidationError):
    pass


def _perm_parity(seq: Sequence[int], ref: Sequence[int]) -> int:
    """+1 if ``seq`` is an even permutation of ``ref``, -1 if odd."""
    pos = [ref.index(x) for x in seq]
    sign = 1
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if pos[i] > pos[j]:
                sign = -sign
    return sign


def _face_of(tet: Sequence[int], i: int) -> tuple[int, ...]:
    """Face opposite local vertex ``i`` with the orientation induced by ``tet``."""
    rest = [v for k, v in enumerate(tet) if k != i]
    if i % 2:
        rest[0], rest[1] = rest[1], rest[0]
    return tuple(rest)


@dataclass(frozen=True)
class DualCycle:
    """Closed walk through face-adjacent tetrahedra.

    Each step ``(tet, face, sign)`` leaves ``tet`` through its face opposite
    local vertex ``face``; ``sign`` is +1 when the crossing follows the face's
    reference orientation (the one induced by its first-listed cobounding
    tetrahedron) and -1 otherwise.
    """

    steps: tuple[tuple[int, int, int], ...]
    name: str = ""

    def __post_init__(self) -> None:
        steps = tuple((int(t), int(f), int(s)) for t, f, s in self.steps)
        if not steps:
            raise CycleError("empty dual walk")
        for t, f, s in steps:
            if not 0 <= f <= 3 or s not in (1, -1):
                raise CycleError(f"malformed step {(t, f, s)}")
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def tetrahedra(self) -> tuple[int, ...]:
        return tuple(t for t, _, _ in self.steps)

    def is_simple(self) -> bool:
        return len(set(self.tetrahedra)) == len(self.steps)

    def to_json(self) -> list[list[int]]:
        return [list(s) for s in self.steps]

    def renamed(self, name: str) -> DualCycle:
        return DualCycle(self.steps, name)


class Triangulation:
    """Closed oriented simplicial 3-manifold.

    Tetrahedra are ordered vertex 4-tuples; the order is the orientation.  The
    constructor validates everything (closedness, manifold vertex links,
    coherent orientation, boundary squared zero) and raises a
    :class:`ValidationError` subclass with a specific diagnostic otherwise.
    """

    def __init__(
        self,
        n_vertices: int,
        tetrahedra: Iterable[Sequence[int]],
        name: str = "",
        designated_cycles: Mapping[str, DualCycle | Sequence[Sequence[int]]] | None = None,
    ):
        self.name = name
        self.n_vertices = int(n_vertices)
        self.tetrahedra = tuple(tuple(int(v) for v in t) for t in tetrahedra)
        self._check_tetrahedra()
        self._build_faces()
        self._build_edges()
        self._check_vertex_links()
        self.complex = ChainComplex(
            [self.n_vertices, len(self.edges), len(self.faces), len(self.tetrahedra)],
            [self._boundary1(), self._boundary2(), self._boundary3()],
        )
        self.designated: dict[str, DualCycle] = {}
        self._add_cycles(designated_cycles or {})

    def _add_cycles(self, cycles: Mapping[str, DualCycle | Sequence[Sequence[int]]]) -> None:
        for key, cyc in cycles.items():
            c = cyc if isinstance(cyc, DualCycle) else DualCycle(tuple(map(tuple, cyc)), key)
            self.validate_cycle(c)
            self.designated[key] = c.renamed(key)

    # -- construction and validation -------------------------------------

    def _check_tetrahedra(self) -> None:
        if self.n_vertices < 1:
            raise ValidationError("triangulation needs at least one vertex")
        if not self.tetrahedra:
            raise ValidationError("triangulation has no tetrahedra")
        seen: dict[frozenset, int] = {}
        for k, t in enumerate(self.tetrahedra):
            if len(t) != 4 or len(set(t)) != 4:
                raise ValidationError(f"tetrahedron {k} {t} does not have 4 distinct vertices")
            if any(not 0 <= v < self.n_vertices for v in t):
                raise ValidationError(f"tetrahedron {k} {t} references a vertex out of range")
            key = frozenset(t)
            if key in seen:
                raise NonManifoldError(f"tetrahedra {seen[key]} and {k} share all four vertices")
            seen[key] = k

    def _build_faces(self) -> None:
        index: dict[frozenset, int] = {}
        faces: list[tuple[int, ...]] = []
        cobound: list[list[tuple[int, int]]] = []
        tet_faces: list[list[int]] = []
        for k, t in enumerate(self.tetrahedra):
            row = []
            for i in range(4):
                f = _face_of(t, i)
                key = frozenset(f)
                if key not in index:
                    index[key] = len(faces)
                    faces.append(f)
                    cobound.append([])
                fi = index[key]
                cobound[fi].append((k, i))
                row.append(fi)
            tet_faces.append(row)
        for fi, cb in enumerate(cobound):
            if len(cb) > 2:
                raise NonManifoldError(
                    f"non-manifold face {sorted(faces[fi])}: shared by {len(cb)} tetrahedra "
                    f"{[k for k, _ in cb]}")
        for fi, cb in enumerate(cobound):
            if len(cb) < 2:
                raise ValidationError(
                    f"open boundary face {sorted(faces[fi])}: only in tetrahedron {cb[0][0]}")
            (k1, i1), (k2, i2) = cb
            if _perm_parity(_face_of(self.tetrahedra[k2], i2), faces[fi]) == 1:
                raise OrientationError(
                    f"orientation mismatch: tetrahedra {k1} and {k2} induce the same "
                    f"orientation on face {sorted(faces[fi])}")
        self.faces = tuple(faces)
        self.face_index = index
        self.face_cobounding = tuple((cb[0], cb[1]) for cb in cobound)
        self.tet_faces = tuple(tuple(r) for r in tet_faces)

    def _build_edges(self) -> None:
        index: dict[tuple[int, int], int] = {}
        for t in self.tetrahedra:
            for a in range(4):
                for b in range(a + 1, 4):
                    e = tuple(sorted((t[a], t[b])))
                    if e not in index:
                        index[e] = len(index)
        self.edge_index = index
        self.edges = tuple(index)

    def _check_vertex_links(self) -> None:
        link: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        for t in self.tetrahedra:
            for i, v in enumerate(t):
                link[v].append(tuple(x for x in t if x != v))
        for v in range(self.n_vertices):
            tris = link.get(v)
            if not tris:
                raise NonManifoldError(f"vertex {v} lies in no tetrahedron")
            verts = {x for tri in tris for x in tri}
            edges: dict[frozenset, list[int]] = defaultdict(list)
            for k, tri in enumerate(tris):
                for a in range(3):
                    edges[frozenset((tri[a], tri[(a + 1) % 3]))].append(k)
            # connectivity of the link through shared edges
            adj: dict[int, set[int]] = defaultdict(set)
            for ks in edges.values():
                for a in ks:
                    adj[a].update(ks)
            seen, stack = {0}, [0]
            while stack:
                for b in adj[stack.pop()]:
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
            euler = len(verts) - len(edges) + len(tris)
            if len(seen) != len(tris) or euler != 2:
                raise NonManifoldError(
                    f"non-manifold vertex link at {v}: Euler characteristic {euler}, "
                    f"{'connected' if len(seen) == len(tris) else 'disconnected'}")

    def _boundary3(self) -> IntMatrix:
        rows = [[0] * len(self.tetrahedra) for _ in self.faces]
        for fi, ((k1, _), (k2, _)) in enumerate(self.face_cobounding):
            rows[fi][k1] += 1
            rows[fi][k2] -= 1
        return IntMatrix.from_rows(rows, len(self.tetrahedra))

    def _boundary2(self) -> IntMatrix:
        rows = [[0] * len(self.faces) for _ in self.edges]
        for fi, (a, b, c) in enumerate(self.faces):
            for u, v, s in ((b, c, 1), (a, c, -1), (a, b, 1)):
                e, sgn = self.oriented_edge(u, v)
                rows[e][fi] += s * sgn
        return IntMatrix.from_rows(rows, len(self.faces))

    def _boundary1(self) -> IntMatrix:
        rows = [[0] * len(self.edges) for _ in range(self.n_vertices)]
        for ei, (a, b) in enumerate(self.edges):
            rows[a][ei] -= 1
            rows[b][ei] += 1
        return IntMatrix.from_rows(rows, len(self.edges))

    # -- combinatorics -------------------------------------------------

    def oriented_edge(self, u: int, v: int) -> tuple[int, int]:
        """(edge index, +1/-1) for the oriented edge u -> v."""
        if u < v:
            return self.edge_index[(u, v)], 1
        return self.edge_index[(v, u)], -1

    @property
    def f_vector(self) -> tuple[int, int, int, int]:
        return (self.n_vertices, len(self.edges), len(self.faces), len(self.tetrahedra))

    def crossing_sign(self, tet: int, face: int) -> int:
        """Sign of leaving ``tet`` through its local face ``face``."""
        fi = self.tet_faces[tet][face]
        return 1 if self.face_cobounding[fi][0][0] == tet else -1

    def neighbor(self, tet: int, face: int) -> int:
        fi = self.tet_faces[tet][face]
        (k1, _), (k2, _) = self.face_cobounding[fi]
        return k2 if k1 == tet else k1

    @cached_property
    def dual_adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each tetrahedron, ``(neighbor, local face)`` pairs in face order."""
        return tuple(
            tuple((self.neighbor(t, i), i) for i in range(4)) for t in range(len(self.tetrahedra))
        )

    def shared_face(self, a: int, b: int) -> int:
        """Local face index of ``a`` glued to ``b``."""
        for nb, i in self.dual_adjacency[a]:
            if nb == b:
                return i
        raise CycleError(f"tetrahedra {a} and {b} are not face-adjacent")

    def walk(self, tets: Sequence[int], name: str = "") -> DualCycle:
        """Dual cycle visiting ``tets`` in order and returning to the first."""
        steps = []
        n = len(tets)
        for k, a in enumerate(tets):
            i = self.shared_face(a, tets[(k + 1) % n])
            steps.append((a, i, self.crossing_sign(a, i)))
        return DualCycle(tuple(steps), name)

    def validate_cycle(self, z: DualCycle) -> None:
        n = len(z.steps)
        nt = len(self.tetrahedra)
        for k, (t, f, s) in enumerate(z.steps):
            if not 0 <= t < nt:
                raise CycleError(f"{z.name or 'cycle'}: step {k} references tetrahedron {t}")
            nxt = z.steps[(k + 1) % n][0]
            if self.neighbor(t, f) != nxt:
                raise CycleError(
                    f"{z.name or 'cycle'}: step {k} leaves tetrahedron {t} through face {f} "
                    f"but the walk continues in {nxt}")
            if self.crossing_sign(t, f) != s:
                raise CycleError(f"{z.name or 'cycle'}: step {k} carries sign {s}, "
                                 f"orientation gives {-s}")

    def crossings(self, z: DualCycle) -> dict[int, int]:
        """Signed crossing count per face index."""
        out: dict[int, int] = {}
        for t, f, s in z.steps:
            fi = self.tet_faces[t][f]
            out[fi] = out.get(fi, 0) + s
        return {k: v for k, v in out.items() if v}

    def dual_to_primal(self, z: DualCycle) -> IntegerChain:
        """Primal 1-cycle homologous to ``z``.

        Each crossing from A into B through face f is pushed to the edge path
        first(A) -> first(f) -> first(B) inside the ball A u B.
        """
        pairs: list[tuple[int, int]] = []
        for t, f, _ in z.steps:
            nb = self.neighbor(t, f)
            w = self.faces[self.tet_faces[t][f]][0]
            for u, v in ((self.tetrahedra[t][0], w), (w, self.tetrahedra[nb][0])):
                if u != v:
                    e, s = self.oriented_edge(u, v)
                    pairs.append((e, s))
        return chain_from_pairs(1, pairs)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {
            "name": self.name,
            "vertices": self.n_vertices,
            "tetrahedra": [list(t) for t in self.tetrahedra],
        }
        if self.designated:
            out["designated_cycles"] = {k: c.to_json() for k, c in self.designated.items()}
        return out

    def dumps(self) -> str:
        """JSON text with one tetrahedron or cycle step per line."""
        data = self.to_json()
        rows = lambda items, pad: (",\n" + pad).join(json.dumps(x) for x in items)  # noqa: E731
        lines = [
            "{",
            f'  "name": {json.dumps(data["name"])},',
            f'  "vertices": {data["vertices"]},',
            '  "tetrahedra": [\n    ' + rows(data["tetrahedra"], "    ") + "\n  ]"
            + ("," if data.get("designated_cycles") else ""),
        ]
        cycles = data.get("designated_cycles") or {}
        if cycles:
            body = ",\n".join(
                f"    {json.dumps(k)}: [\n      " + rows(v, "      ") + "\n    ]"
                for k, v in cycles.items())
            lines.append('  "designated_cycles": {\n' + body + "\n  }")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def with_cycles(self, cycles: Mapping[str, DualCycle]) -> Triangulation:
        # same complex, so the validated tables and cached homology are shared
        out = object.__new__(Triangulation)
        out.__dict__.update(self.__dict__)
        out.designated = dict(self.designated)
        out._add_cycles(cycles)
        return out

    def __repr__(self) -> str:
        return f"Triangulation({self.name!r}, f_vector={self.f_vector})"


_FIELDS = {"name", "vertices", "tetrahedra", "designated_cycles"}


def triangulation_from_json(data: object) -> Triangulation:
    if not isinstance(data, dict):
        raise ParseError("triangulation file must hold a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}")
    for key in ("vertices", "tetrahedra"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("'name' must be a string")
    nv = data["vertices"]
    if not isinstance(nv, int) or isinstance(nv, bool):
        raise ParseError("'vertices' must be an integer count")
    tets = data["tetrahedra"]
    if not isinstance(tets, list) or not all(
        isinstance(t, list) and len(t) == 4 and all(isinstance(v, int) for v in t) for t in tets
    ):
        raise ParseError("'tetrahedra' must be a list of 4-element integer lists")
    cycles_raw = data.get("designated_cycles", {})
    if not isinstance(cycles_raw, dict):
        raise ParseError("'designated_cycles' must map names to step lists")
    cycles = {}
    for key, steps in cycles_raw.items():
        if not isinstance(steps, list) or not all(
            isinstance(s, list) and len(s) == 3 and all(isinstance(x, int) for x in s)
            for s in steps
        ):
            raise ParseError(f"designated cycle {key!r} must be a list of [tet, face, sign]")
        try:
            cycles[key] = DualCycle(tuple(tuple(s) for s in steps), key)
        except CycleError as exc:
            raise ParseError(f"designated cycle {key!r}: {exc}") from exc
    return Triangulation(nv, tets, name, cycles)


def loads_triangulation(text: str) -> Triangulation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return triangulation_from_json(data)


def load_triangulation(path: str | Path) -> Triangulation:
    return loads_triangulation(Path(path).read_text(encoding="utf-8"))
