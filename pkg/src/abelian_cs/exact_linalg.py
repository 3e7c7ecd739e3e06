"""Exact integer and rational linear algebra.

Everything here runs on Python ints, so no entry can overflow.  Matrices are
small dense row-major tables; the elimination kernels skip zero entries,
which keeps boundary matrices of desk-scale triangulations cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when matrix and vector shapes are incompatible."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix.

    ``rows`` and ``cols`` may be zero; ``entries`` is a tuple of row tuples.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(f"entry table does not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> IntMatrix:
        if self.rows == 0:
            return IntMatrix(self.cols, 0, tuple(() for _ in range(self.cols)))
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum(r[j] * x for j, x in nz) for r in self.entries)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().entries if other.cols else ()
        out = []
        for r in self.entries:
            nz = [(k, x) for k, x in enumerate(r) if x]
            out.append(tuple(sum(x * c[k] for k, x in nz) for c in cols))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def determinant(self) -> int:
        """Fraction-free (Bareiss) determinant of a square matrix."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def _transpose_lists(a: list[list[int]], rows: int, cols: int) -> list[list[int]]:
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def _identity_lists(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _axpy(dst: list[int], src: list[int], q: int) -> None:
    """dst -= q * src, touching only the nonzero entries of src."""
    for c, y in enumerate(src):
        if y:
            dst[c] -= q * y


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with unimodular ``U``, ``V`` and diagonal ``D``.

    ``U_inverse`` is carried along because its columns give explicit cycle
    representatives for the invariant factors (the image of ``A`` is spanned
    by ``d_i`` times column ``i`` of ``U_inverse``).
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int
    U_inverse: IntMatrix

    @property
    def divisors(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(self.rank))


def _find_pivot(a: list[list[int]], t: int, m: int, n: int) -> tuple[int, int] | None:
    # smallest |entry| in a[t:, t:], first occurrence in row-major order
    best = None
    best_abs = 0
    for i in range(t, m):
        seg = a[i][t:] if t else a[i]
        if not any(seg):
            continue
        hits = [seg.index(v) for v in (1, -1) if v in seg]
        if hits:
            return i, t + min(hits)
        for j, x in enumerate(seg):
            if x and (best is None or abs(x) < best_abs):
                best, best_abs = (i, t + j), abs(x)
    return best


def _smith(a: list[list[int]], m: int, n: int, transforms: bool):
    U = _identity_lists(m) if transforms else None
    UinvT = _identity_lists(m) if transforms else None
    VT = _identity_lists(n) if transforms else None

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            UinvT[i], UinvT[j] = UinvT[j], UinvT[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            VT[i], VT[j] = VT[j], VT[i]

    def row_sub(r: int, t: int, q: int) -> None:
        # row r -= q * row t
        _axpy(a[r], a[t], q)
        if transforms:
            _axpy(U[r], U[t], q)
            _axpy(UinvT[t], UinvT[r], -q)

    def col_sub(c: int, t: int, q: int, rows_nz: list[int]) -> None:
        # column c -= q * column t
        for r in rows_nz:
            a[r][c] -= q * a[r][t]
        if transforms:
            _axpy(VT[c], VT[t], q)

    t = 0
    while t < min(m, n):
        piv = _find_pivot(a, t, m, n)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            p = a[t][t]
            changed = False
            for r in range(t + 1, m):
                x = a[r][t]
                if x:
                    row_sub(r, t, x // p)
                    changed |= a[r][t] != 0
            rows_nz = [r for r in range(t, m) if a[r][t]]
            for c in range(t + 1, n):
                x = a[t][c]
                if x:
                    col_sub(c, t, x // p, rows_nz)
                    changed |= a[t][c] != 0
            if changed:
                best, where = abs(p), None
                for r in range(t + 1, m):
                    x = a[r][t]
                    if x and abs(x) < best:
                        best, where = abs(x), ("r", r)
                for c in range(t + 1, n):
                    x = a[t][c]
                    if x and abs(x) < best:
                        best, where = abs(x), ("c", c)
                if where is not None:
                    if where[0] == "r":
                        swap_rows(t, where[1])
                    else:
                        swap_cols(t, where[1])
                continue
            if abs(p) != 1:
                bad = next(
                    (r for r in range(t + 1, m) if any(x % p for x in a[r][t + 1:])),
                    None,
                )
                if bad is not None:
                    # row t += row bad
                    row_sub(t, bad, -1)
                    continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                U[t] = [-x for x in U[t]]
                UinvT[t] = [-x for x in UinvT[t]]
        t += 1
    return a, t, U, UinvT, VT


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting picks the smallest nonzero absolute value in the active block,
    first occurrence in row-major order, so the output is deterministic.
    """
    m, n = A.shape
    d, rank, U, UinvT, VT = _smith(A.to_lists(), m, n, transforms=True)
    return SmithDecomposition(
        U=IntMatrix.from_rows(U, m),
        D=IntMatrix.from_rows(d, n),
        V=IntMatrix.from_rows(_transpose_lists(VT, n, n), n),
        rank=rank,
        U_inverse=IntMatrix.from_rows(_transpose_lists(UinvT, m, m), m),
    )


def invariant_factors(A: IntMatrix) -> tuple[int, ...]:
    """Nonzero Smith divisors of ``A`` without building the transforms."""
    m, n = A.shape
    d, rank, *_ = _smith(A.to_lists(), m, n, transforms=False)
    return tuple(d[i][i] for i in range(rank))


class HermiteSolver:
    """Column-style Hermite normal form ``A @ W == H`` reused across right-hand sides.

    ``H`` is in column echelon form with positive pivots and the entries to the
    left of each pivot reduced into ``[0, pivot)``.
    """

    def __init__(self, A: IntMatrix):
        m, n = A.shape
        self.rows, self.cols = m, n
        HT = _transpose_lists(A.to_lists(), m, n)
        WT = _identity_lists(n)
        pivots: list[int] = []
        k = 0
        for i in range(m):
            if k == n:
                break
            while True:
                live = [c for c in range(k, n) if HT[c][i]]
                if not live:
                    break
                c0 = min(live, key=lambda c: abs(HT[c][i]))
                if c0 != k:
                    HT[k], HT[c0] = HT[c0], HT[k]
                    WT[k], WT[c0] = WT[c0], WT[k]
                p = HT[k][i]
                done = True
                for c in range(k + 1, n):
                    x = HT[c][i]
                    if x:
                        q = x // p
                        _axpy(HT[c], HT[k], q)
                        _axpy(WT[c], WT[k], q)
                        done &= HT[c][i] == 0
                if done:
                    break
            if k < n and HT[k][i]:
                if HT[k][i] < 0:
                    HT[k] = [-x for x in HT[k]]
                    WT[k] = [-x for x in WT[k]]
                p = HT[k][i]
                for c in range(k):
                    q = HT[c][i] // p
                    if q:
                        _axpy(HT[c], HT[k], q)
                        _axpy(WT[c], WT[k], q)
                pivots.append(i)
                k += 1
        self.pivot_rows = tuple(pivots)
        self._HT = HT[: len(pivots)]
        self._WT = WT[: len(pivots)]
        self._W_full = WT

    @property
    def H(self) -> IntMatrix:
        r = len(self._HT)
        return IntMatrix.from_rows(_transpose_lists(self._HT, r, self.rows), r)

    @property
    def W(self) -> IntMatrix:
        n = self.cols
        return IntMatrix.from_rows(_transpose_lists(self._W_full, n, n), n)

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """Some integer ``x`` with ``A @ x == b``, or ``None`` when none exists."""
        if len(b) != self.rows:
            raise DimensionError(f"right-hand side of length {len(b)} for {self.rows} rows")
        y: list[int] = []
        for k, i in enumerate(self.pivot_rows):
            resid = b[i] - sum(self._HT[j][i] * y[j] for j in range(k) if y[j])
            q, r = divmod(resid, self._HT[k][i])
            if r:
                return None
            y.append(q)
        # rows without a pivot must already agree
        hy = [0] * self.rows
        for k, yk in enumerate(y):
            if yk:
                for i, h in enumerate(self._HT[k]):
                    if h:
                        hy[i] += h * yk
        if any(hy[i] != b[i] for i in range(self.rows)):
            return None
        x = [0] * self.cols
        for k, yk in enumerate(y):
            if yk:
                for j, w in enumerate(self._WT[k]):
                    if w:
                        x[j] += w * yk
        return tuple(x)


def solve_integer(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Integer solution of ``A @ x == b`` or ``None``.

    >>> solve_integer(IntMatrix.from_rows([[2]]), [4])
    (2,)
    >>> solve_integer(IntMatrix.from_rows([[2]]), [3]) is None
    True
    """
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.rows} rows")
    return HermiteSolver(A).solve(b)


class PhaseModOne:
    """Exact element of Q/Z, stored as its representative in [0, 1)."""

    __slots__ = ("_value",)

    def __init__(self, value: int | Fraction | str = 0):
        v = Fraction(value)
        self._value = v - (v.numerator // v.denominator)

    @property
    def value(self) -> Fraction:
        return self._value

    @property
    def numerator(self) -> int:
        return self._value.numerator

    @property
    def denominator(self) -> int:
        return self._value.denominator

    def __add__(self, other: PhaseModOne | int | Fraction) -> PhaseModOne:
        o = other.value if isinstance(other, PhaseModOne) else Fraction(other)
        return PhaseModOne(self._value + o)

    __radd__ = __add__

    def __neg__(self) -> PhaseModOne:
        return PhaseModOne(-self._value)

    def __sub__(self, other: PhaseModOne | int | Fraction) -> PhaseModOne:
        o = other.value if isinstance(other, PhaseModOne) else Fraction(other)
        return PhaseModOne(self._value - o)

    def scale(self, n: int | Fraction) -> PhaseModOne:
        """Multiply the [0, 1) representative by ``n`` and reduce.

        Scaling by a non-integer is representative dependent; callers that
        pass fractions are working with a chosen lift.
        """
        return PhaseModOne(self._value * Fraction(n))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PhaseModOne):
            return self._value == other._value
        if isinstance(other, (int, Fraction)):
            return self._value == PhaseModOne(other)._value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("PhaseModOne", self._value))

    def __repr__(self) -> str:
        return f"PhaseModOne({self})"

    def __str__(self) -> str:
        return format_rational(self._value)

    @classmethod
    def parse(cls, text: str) -> PhaseModOne:
        return cls(Fraction(text))


def phase_add(p: PhaseModOne, other: PhaseModOne | int | Fraction) -> PhaseModOne:
    return p + other


def phase_scale(p: PhaseModOne, n: int | Fraction) -> PhaseModOne:
    return p.scale(n)


def format_rational(x: Fraction | int) -> str:
    """Render as ``num/den`` (always with an explicit denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
