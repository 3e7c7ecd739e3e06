"""Level and charge quantization, and Wilson-line expectation values.

Every value is exp(2 pi i * phase) with an exact rational phase; decimals are
rendered on request for display only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .chain_complex import IntegerChain
from .exact_linalg import PhaseModOne, format_rational
from .linking import (
    FREE,
    TORSION,
    TRIVIAL,
    CycleClass,
    FramedCycle,
    LinkingError,
    check_disjoint,
    classify,
    intersection_number,
    linking_number,
    self_linking,
    verify_witness,
)
from .manifold.triangulation import Triangulation


class UnsupportedManifoldError(ValueError):
    """Raised for manifolds or cycles outside the pure-torsion setting."""


class ConstraintViolation(ValueError):
    def __init__(self, result: "Constraint"):
        super().__init__(result.reason)
        self.result = result


@dataclass(frozen=True)
class CSLevel:
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise TypeError("level must be an integer")
        if self.k == 0:
            raise ValueError("level must be nonzero")


@dataclass(frozen=True)
class Constraint:
    """Outcome of a quantization check; ``divisor`` is the required factor."""

    admissible: bool
    divisor: int
    reason: str

    def __bool__(self) -> bool:
        return self.admissible


def _require_torsion_h1(M: Triangulation) -> int:
    h1 = M.complex.homology(1)
    if h1.betti:
        raise UnsupportedManifoldError(
            f"unsupported manifold class: H_1({M.name or 'M'}) = {h1} has a free part")
    return h1.exponent


def check_level(k: CSLevel | int, M: Triangulation) -> Constraint:
    """Admissible exactly when the torsion exponent p of H_1 divides k."""
    k = k if isinstance(k, CSLevel) else CSLevel(k)
    p = _require_torsion_h1(M)
    if k.k % p == 0:
        return Constraint(True, p, f"k = {p}*{k.k // p}")
    return Constraint(False, p, f"level k = {k.k} violates k = {p}l: H_1({M.name or 'M'}) "
                                f"has torsion exponent {p} and {p} does not divide {k.k}")


def check_charge(q: int, cls: CycleClass, M: Triangulation | None = None) -> Constraint:
    """Trivial cycles take any charge; a torsion cycle of degree p needs p | q."""
    if cls.kind == FREE:
        raise UnsupportedManifoldError("unsupported manifold class: cycle is free in H_1")
    if cls.kind != TORSION:
        return Constraint(True, 1, "trivial cycle: any charge")
    p = cls.degree
    if q % p == 0:
        return Constraint(True, p, f"q = {p}*{q // p}")
    return Constraint(False, p, f"charge q = {q} violates q = {p}m on a torsion cycle "
                                f"of degree {p}")


@dataclass(frozen=True)
class WilsonComponent:
    framed: FramedCycle
    charge: int

    @property
    def name(self) -> str:
        return self.framed.name


@dataclass(frozen=True)
class WilsonLink:
    components: tuple[WilsonComponent, ...]
    manifold: Triangulation

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise LinkingError("a link needs at least one component")
        for c in self.components:
            if not isinstance(c.charge, int) or c.charge == 0:
                raise LinkingError(f"component {c.name or '?'} has charge {c.charge!r}; "
                                   "charges must be nonzero integers")
            if c.framed.manifold.complex is not self.manifold.complex \
                    and c.framed.manifold.tetrahedra != self.manifold.tetrahedra:
                raise LinkingError(f"component {c.name or '?'} lives on another manifold")
        walks = []
        for c in self.components:
            walks += [c.framed.cycle, c.framed.pushoff]
        check_disjoint(walks)

    @classmethod
    def of(cls, manifold: Triangulation, parts: Sequence[tuple[FramedCycle, int]]) -> WilsonLink:
        return cls(tuple(WilsonComponent(f, q) for f, q in parts), manifold)


@dataclass(frozen=True)
class ExpectationValue:
    """exp(2 pi i * phase); the modulus is exactly one by construction."""

    phase: PhaseModOne

    def decimal(self, digits: int = 15) -> str:
        return render_decimal(self.phase, digits)

    def __str__(self) -> str:
        return f"exp(2*pi*i*{self.phase})"


def render_decimal(phase: PhaseModOne, digits: int) -> str:
    if digits < 1:
        raise ValueError("decimal digits must be positive")
    with mpmath.workdps(digits + 10):
        angle = 2 * mpmath.pi * mpmath.mpf(phase.numerator) / phase.denominator
        re, im = mpmath.cos(angle), mpmath.sin(angle)
        # snap exact zeros so the rendering is stable across precisions
        tiny = mpmath.mpf(10) ** (-(digits + 5))
        re = mpmath.mpf(0) if abs(re) < tiny else re
        im = mpmath.mpf(0) if abs(im) < tiny else im
        sign = "-" if im < 0 else "+"
        return f"{mpmath.nstr(re, digits)} {sign} {mpmath.nstr(abs(im), digits)}i"


@dataclass(frozen=True)
class ComponentReport:
    name: str
    kind: str
    degree: int
    charge: int
    self_linking: Fraction
    witness_crossings: int


@dataclass(frozen=True)
class WilsonReport:
    manifold: str
    level: int
    components: tuple[ComponentReport, ...]
    linking_matrix: tuple[tuple[Fraction, ...], ...]
    expectation: ExpectationValue

    @property
    def phase(self) -> PhaseModOne:
        return self.expectation.phase


def _phase(level: int, charges: Sequence[int], L: Sequence[Sequence[Fraction]]) -> PhaseModOne:
    n = len(charges)
    total = sum(Fraction(charges[i] ** 2) * L[i][i] for i in range(n))
    total += 2 * sum(charges[i] * charges[j] * L[i][j] for i in range(n) for j in range(i + 1, n))
    return PhaseModOne(-total / (4 * level))


def evaluate(link: WilsonLink, k: CSLevel | int,
             witnesses: Sequence[IntegerChain | None] | None = None) -> WilsonReport:
    """Check every constraint, then assemble the phase from the linking matrix.

    The diagonal holds framed self-linkings, the off-diagonal entry (i, j)
    resolves component i.  Both halves of the matrix must give the same
    phase; a mismatch raises instead of picking one.  ``witnesses`` may
    replace the computed bounding chain of any component (same degree); each
    replacement is checked.
    """
    k = k if isinstance(k, CSLevel) else CSLevel(k)
    M = link.manifold
    lv = check_level(k, M)
    if not lv:
        raise ConstraintViolation(lv)
    classes: list[CycleClass] = []
    for c in link.components:
        cls = classify(c.framed.cycle, M)
        if cls.kind == FREE:
            raise UnsupportedManifoldError(
                f"unsupported manifold class: component {c.name or '?'} is free in H_1")
        ch = check_charge(c.charge, cls, M)
        if not ch:
            raise ConstraintViolation(Constraint(False, ch.divisor, f"component {c.name}: {ch.reason}"))
        if witnesses is not None and witnesses[len(classes)] is not None:
            cls = CycleClass(cls.kind, cls.degree, witnesses[len(classes)])
            verify_witness(M, c.framed.cycle, cls.witness, cls.degree)
        classes.append(cls)
    n = len(link.components)
    L: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    reports = []
    for i, (c, cls) in enumerate(zip(link.components, classes)):
        crossings = intersection_number(cls.witness, c.framed.pushoff, M)
        L[i][i] = self_linking(c.framed, cls.witness, cls.degree).value
        reports.append(ComponentReport(c.name, cls.kind, cls.degree, c.charge, L[i][i], crossings))
        for j, d in enumerate(link.components):
            if j != i:
                L[i][j] = linking_number(c.framed.cycle, d.framed.cycle, M,
                                         cls.witness, cls.degree).value
    charges = [c.charge for c in link.components]
    phase = _phase(k.k, charges, L)
    transposed = [[L[j][i] for j in range(n)] for i in range(n)]
    if _phase(k.k, charges, transposed) != phase:
        raise LinkingError("phase depends on which argument of a linking number is resolved")
    return WilsonReport(M.name, k.k, tuple(reports), tuple(map(tuple, L)), ExpectationValue(phase))


def wilson_expectation(link: WilsonLink, k: CSLevel | int,
                       witnesses: Sequence[IntegerChain | None] | None = None) -> ExpectationValue:
    return evaluate(link, k, witnesses).expectation


def consistency_torsion_contains_trivial(fz: FramedCycle, q: int, k: CSLevel | int) -> bool:
    """Compare the degree-1 phase (witness C) with the degree-2 phase (witness 2C of 2z)."""
    k = k if isinstance(k, CSLevel) else CSLevel(k)
    cls = classify(fz.cycle, fz.manifold)
    if cls.kind != TRIVIAL:
        raise LinkingError(f"{fz.name or 'cycle'} is {cls.describe()}, not trivial")
    C = cls.witness
    direct = self_linking(fz, C, 1).value
    doubled = self_linking(fz, 2 * C, 2).value
    factor = Fraction(-q * q, 4 * k.k)
    return PhaseModOne(factor * direct) == PhaseModOne(factor * doubled)


def format_matrix(L: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in L]
