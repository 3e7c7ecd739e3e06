"""Finite chain complexes over Z and their integral homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exact_linalg import IntMatrix, SmithDecomposition, invariant_factors, smith_normal_form


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class IntegerChain:
    """Sparse Z-linear combination of basis cells of one degree."""

    degree: int
    coefficients: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {int(i): int(c) for i, c in self.coefficients.items() if c}
        if any(i < 0 for i in clean):
            raise ChainError("negative basis index")
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def from_vector(cls, degree: int, vec: Sequence[int]) -> IntegerChain:
        return cls(degree, {i: c for i, c in enumerate(vec) if c})

    def to_vector(self, size: int) -> list[int]:
        v = [0] * size
        for i, c in self.coefficients.items():
            if i >= size:
                raise ChainError(f"basis index {i} outside a basis of size {size}")
            v[i] = c
        return v

    def is_zero(self) -> bool:
        return not self.coefficients

    def support(self) -> tuple[int, ...]:
        return tuple(self.coefficients)

    def __getitem__(self, i: int) -> int:
        return self.coefficients.get(i, 0)

    def __add__(self, other: IntegerChain) -> IntegerChain:
        if other.degree != self.degree:
            raise ChainError(f"adding chains of degree {self.degree} and {other.degree}")
        out = dict(self.coefficients)
        for i, c in other.coefficients.items():
            out[i] = out.get(i, 0) + c
        return IntegerChain(self.degree, out)

    def __neg__(self) -> IntegerChain:
        return IntegerChain(self.degree, {i: -c for i, c in self.coefficients.items()})

    def __sub__(self, other: IntegerChain) -> IntegerChain:
        return self + (-other)

    def __mul__(self, n: int) -> IntegerChain:
        return IntegerChain(self.degree, {i: n * c for i, c in self.coefficients.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerChain):
            return NotImplemented
        return self.degree == other.degree and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.coefficients.items())))


@dataclass(frozen=True)
class HomologyGroup:
    """Z^betti + Z/t_1 + ... + Z/t_r with t_1 | t_2 | ... | t_r."""

    betti: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = tuple(self.torsion)
        if any(x <= 1 for x in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ChainError(f"torsion coefficients {t} do not form a divisor chain")
        object.__setattr__(self, "torsion", t)

    @property
    def exponent(self) -> int:
        """Largest torsion coefficient (1 when torsion free)."""
        return self.torsion[-1] if self.torsion else 1

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * (1 if self.betti == 1 else 0)
        if self.betti > 1:
            parts = [f"Z^{self.betti}"]
        parts += [f"Z_{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


class ChainComplex:
    """C_dim -> ... -> C_1 -> C_0 with dense boundary matrices.

    ``boundaries[k - 1]`` is the matrix of the boundary map from degree ``k``
    to degree ``k - 1`` (shape ``sizes[k - 1] x sizes[k]``).
    """

    def __init__(self, sizes: Sequence[int], boundaries: Sequence[IntMatrix], check: bool = True):
        self.sizes = tuple(sizes)
        self.dimension = len(self.sizes) - 1
        if len(boundaries) != self.dimension:
            raise ChainError(f"need {self.dimension} boundary maps, got {len(boundaries)}")
        for k, B in enumerate(boundaries, start=1):
            if B.shape != (self.sizes[k - 1], self.sizes[k]):
                raise ChainError(f"boundary {k} has shape {B.shape}, "
                                 f"expected {(self.sizes[k - 1], self.sizes[k])}")
        self._boundaries = tuple(boundaries)
        # column-sparse copies for applying the boundary to small chains
        self._columns = tuple(
            tuple({i: B[i, j] for i in range(B.rows) if B[i, j]} for j in range(B.cols))
            for B in boundaries
        )
        if check:
            self.check_square_zero()

    def boundary_matrix(self, k: int) -> IntMatrix:
        """Matrix of the boundary from degree k; zero maps at the two ends."""
        if k == 0:
            return IntMatrix.zeros(0, self.sizes[0])
        if k == self.dimension + 1:
            return IntMatrix.zeros(self.sizes[self.dimension], 0)
        if not 1 <= k <= self.dimension:
            raise ChainError(f"degree {k} outside 0..{self.dimension + 1}")
        return self._boundaries[k - 1]

    def check_square_zero(self) -> None:
        for k in range(2, self.dimension + 1):
            cols = self._columns[k - 1]
            lower = self._columns[k - 2]
            for j, col in enumerate(cols):
                acc: dict[int, int] = {}
                for i, c in col.items():
                    for r, d in lower[i].items():
                        acc[r] = acc.get(r, 0) + c * d
                if any(acc.values()):
                    raise ChainError(f"boundary squared is nonzero on cell {j} of degree {k}")

    def boundary(self, c: IntegerChain) -> IntegerChain:
        if c.degree < 1:
            raise ChainError("boundary of a degree-0 chain")
        if c.degree > self.dimension:
            raise ChainError(f"degree {c.degree} above complex dimension {self.dimension}")
        cols = self._columns[c.degree - 1]
        out: dict[int, int] = {}
        for j, a in c.coefficients.items():
            if j >= len(cols):
                raise ChainError(f"basis index {j} outside degree {c.degree}")
            for i, b in cols[j].items():
                out[i] = out.get(i, 0) + a * b
        return IntegerChain(c.degree - 1, out)

    def is_cycle(self, c: IntegerChain) -> bool:
        if c.degree == 0:
            return True
        return self.boundary(c).is_zero()

    @cached_property
    def _factors(self) -> tuple[tuple[int, ...], ...]:
        # invariant factors of boundary_k for k = 0 .. dimension + 1
        return tuple(invariant_factors(self.boundary_matrix(k)) for k in range(self.dimension + 2))

    def smith(self, k: int) -> SmithDecomposition:
        """Full Smith decomposition of the boundary out of degree k (cached)."""
        cache = self.__dict__.setdefault("_smith_cache", {})
        if k not in cache:
            cache[k] = smith_normal_form(self.boundary_matrix(k))
        return cache[k]

    def homology(self, k: int) -> HomologyGroup:
        if not 0 <= k <= self.dimension:
            raise ChainError(f"homology degree {k} outside 0..{self.dimension}")
        rank_out = len(self._factors[k])
        image = self._factors[k + 1]
        betti = self.sizes[k] - rank_out - len(image)
        return HomologyGroup(betti, tuple(d for d in image if d > 1))

    def torsion_generators(self, k: int) -> list[tuple[int, IntegerChain]]:
        """Cycles representing the torsion summands of H_k, with their orders.

        For ``U @ B @ V == D`` (B the boundary into degree k) the image of B is
        spanned by ``d_i`` times column ``i`` of ``U^-1``; the columns with
        ``d_i > 1`` generate the torsion.
        """
        s = self.smith(k + 1)
        Uinv = s.U_inverse
        return [
            (d, IntegerChain.from_vector(k, Uinv.column(i)))
            for i, d in enumerate(s.divisors)
            if d > 1
        ]

    def torsion_coordinates(self, k: int, cycle: IntegerChain) -> tuple[int, ...]:
        """Class of a k-cycle in the torsion of H_k, one residue per divisor.

        Only meaningful when H_k has no free part; the coordinates are taken
        in the generators returned by :meth:`torsion_generators`.
        """
        s = self.smith(k + 1)
        v = cycle.to_vector(self.sizes[k])
        out = []
        for i, d in enumerate(s.divisors):
            if d > 1:
                out.append(sum(u * x for u, x in zip(s.U.row(i), v) if x) % d)
        return tuple(out)


def homology(cx: ChainComplex, k: int) -> HomologyGroup:
    return cx.homology(k)


def boundary(cx: ChainComplex, c: IntegerChain) -> IntegerChain:
    return cx.boundary(c)


def is_cycle(cx: ChainComplex, c: IntegerChain) -> bool:
    return cx.is_cycle(c)


def all_homology(cx: ChainComplex) -> tuple[HomologyGroup, ...]:
    return tuple(cx.homology(k) for k in range(cx.dimension + 1))


def chain_from_pairs(degree: int, pairs: Iterable[tuple[int, int]]) -> IntegerChain:
    out: dict[int, int] = {}
    for i, c in pairs:
        out[i] = out.get(i, 0) + c
    return IntegerChain(degree, out)
