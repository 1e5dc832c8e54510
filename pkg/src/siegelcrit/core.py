"""Shared domain types: Siegel points, characteristics, group elements, policies.

All types here are immutable values; they can be shared freely between
concurrent workers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SiegelError", "DomainViolation", "NumericalFailure",
    "NotPositiveDefinite", "DimensionMismatch", "TruncationFailure",
    "DegenerateValue", "SingularDenominator", "ReductionStalled",
    "NotInGroup", "ParityViolation", "SqrtFailure", "NotAStabilizer",
    "NotUnitary", "NoConvergence", "EscapedDomain", "DegenerateHessian",
    "ConventionUnvalidated", "NoD3Structure", "InclusionFailure",
    "SiegelPoint", "make_siegel_point", "Characteristic",
    "SymplecticTransform", "symplectic_compose", "MoebiusElement",
    "TruncationPolicy", "RationalValue", "RootOfUnity",
    "MINOR_FLOOR",
]

# A leading principal minor of Im B below this counts as "not positive
# definite"; every matrix of interest has minors of order one.
MINOR_FLOOR = 1e-14


class SiegelError(Exception):
    """Base class for all package errors."""


class DomainViolation(SiegelError):
    """Precondition / domain errors (CLI exit code 3)."""


class NumericalFailure(SiegelError):
    """Numerical failures: no convergence, truncation, ... (CLI exit code 4)."""


class NotPositiveDefinite(DomainViolation):
    pass


class DimensionMismatch(DomainViolation):
    pass


class DegenerateValue(DomainViolation):
    pass


class SingularDenominator(DomainViolation):
    pass


class NotAStabilizer(DomainViolation):
    pass


class ParityViolation(DomainViolation):
    pass


class NotInGroup(DomainViolation):
    pass


class InclusionFailure(DomainViolation):
    pass


class TruncationFailure(NumericalFailure):
    pass


class ReductionStalled(NumericalFailure):
    pass


class SqrtFailure(NumericalFailure):
    pass


class NotUnitary(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass


class EscapedDomain(NumericalFailure):
    pass


class DegenerateHessian(NumericalFailure):
    pass


class ConventionUnvalidated(NumericalFailure):
    pass


class NoD3Structure(NumericalFailure):
    pass


RationalValue = Fraction  # exact rationals; fractions.Fraction already keeps lowest terms


def _triangle_size(genus: int) -> int:
    return genus * (genus + 1) // 2


def _leading_minors(Y: np.ndarray) -> list[float]:
    return [float(np.linalg.det(Y[: k + 1, : k + 1])) for k in range(Y.shape[0])]


@dataclass(frozen=True)
class SiegelPoint:
    """A point of the Siegel upper half-space: symmetric B with Im B > 0.

    Only the upper triangle is stored (row-major), so symmetry is structural.
    For genus 2 the real coordinates are (x1, x2, x3, y1, y2, y3) with
    B11 = x1 + i*y1, B12 = x2 + i*y2, B22 = x3 + i*y3.
    """

    genus: int
    entries: tuple[complex, ...]

    @property
    def matrix(self) -> np.ndarray:
        g = self.genus
        M = np.zeros((g, g), dtype=complex)
        k = 0
        for i in range(g):
            for j in range(i, g):
                M[i, j] = M[j, i] = self.entries[k]
                k += 1
        return M

    @property
    def imag_matrix(self) -> np.ndarray:
        return self.matrix.imag

    @property
    def coords(self) -> np.ndarray:
        """Real coordinates (x1..x_m, y1..y_m) along the upper triangle."""
        e = np.asarray(self.entries)
        return np.concatenate([e.real, e.imag])

    @classmethod
    def from_matrix(cls, M: np.ndarray, symmetry_tol: float = 1e-10) -> "SiegelPoint":
        M = np.asarray(M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
        if np.abs(M - M.T).max() > symmetry_tol:
            raise DimensionMismatch("matrix is not symmetric")
        M = (M + M.T) / 2
        g = M.shape[0]
        entries = tuple(M[i, j] for i in range(g) for j in range(i, g))
        return make_siegel_point(g, entries)

    @classmethod
    def from_coords(cls, v: Sequence[float], genus: int = 2) -> "SiegelPoint":
        v = np.asarray(v, dtype=float)
        m = _triangle_size(genus)
        if v.shape != (2 * m,):
            raise DimensionMismatch(f"expected {2 * m} real coordinates, got {v.shape}")
        return make_siegel_point(genus, tuple(v[:m] + 1j * v[m:]))


def make_siegel_point(genus: int, entries: Iterable[complex]) -> SiegelPoint:
    """Validate and build a SiegelPoint from its upper-triangle entries."""
    entries = tuple(complex(e) for e in entries)
    if genus < 1:
        raise DimensionMismatch("genus must be a positive integer")
    if len(entries) != _triangle_size(genus):
        raise DimensionMismatch(
            f"genus {genus} needs {_triangle_size(genus)} entries, got {len(entries)}")
    pt = SiegelPoint(genus, entries)
    for minor in _leading_minors(pt.imag_matrix):
        if minor < MINOR_FLOOR:
            raise NotPositiveDefinite(
                f"Im B has a leading principal minor {minor:.3e} below {MINOR_FLOOR}")
    return pt


@dataclass(frozen=True)
class Characteristic:
    """Half-integer theta characteristic (p, q), components in {0, 1/2}."""

    genus: int
    p: tuple[float, ...]
    q: tuple[float, ...]

    def __post_init__(self):
        if len(self.p) != self.genus or len(self.q) != self.genus:
            raise DimensionMismatch("characteristic length must equal the genus")
        for v in self.p + self.q:
            if v not in (0.0, 0.5):
                raise DomainViolation(f"characteristic components must be 0 or 1/2, got {v}")

    @property
    def parity(self) -> int:
        return int(round(4 * sum(a * b for a, b in zip(self.p, self.q)))) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0


def _symplectic_form(genus: int) -> np.ndarray:
    J = np.zeros((2 * genus, 2 * genus), dtype=int)
    J[:genus, genus:] = np.eye(genus, dtype=int)
    J[genus:, :genus] = -np.eye(genus, dtype=int)
    return J


@dataclass(frozen=True)
class SymplecticTransform:
    """Integer symplectic 2g x 2g matrix in block form [[A, B], [C, D]]."""

    genus: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        M = self.matrix
        n = 2 * self.genus
        if M.shape != (n, n):
            raise DimensionMismatch(f"expected {n}x{n} matrix, got {M.shape}")
        J = _symplectic_form(self.genus)
        if not np.array_equal(M @ J @ M.T, J):
            raise DomainViolation("matrix does not satisfy M J M^t = J")
        if round(float(np.linalg.det(M))) != 1:
            raise DomainViolation("symplectic matrix must have determinant +1")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=int)

    @property
    def A(self) -> np.ndarray:
        return self.matrix[: self.genus, : self.genus]

    @property
    def B(self) -> np.ndarray:
        return self.matrix[: self.genus, self.genus:]

    @property
    def C(self) -> np.ndarray:
        return self.matrix[self.genus:, : self.genus]

    @property
    def D(self) -> np.ndarray:
        return self.matrix[self.genus:, self.genus:]

    @classmethod
    def from_matrix(cls, M: np.ndarray) -> "SymplecticTransform":
        M = np.asarray(M)
        Mi = np.rint(M).astype(int)
        if np.abs(M - Mi).max() > 1e-9:
            raise DomainViolation("symplectic matrix entries must be integers")
        g = Mi.shape[0] // 2
        return cls(g, tuple(tuple(int(x) for x in row) for row in Mi))

    @classmethod
    def from_blocks(cls, A, B, C, D) -> "SymplecticTransform":
        return cls.from_matrix(np.block([[np.asarray(A), np.asarray(B)],
                                         [np.asarray(C), np.asarray(D)]]))

    @classmethod
    def identity(cls, genus: int = 2) -> "SymplecticTransform":
        return cls.from_matrix(np.eye(2 * genus, dtype=int))

    def inverse(self) -> "SymplecticTransform":
        J = _symplectic_form(self.genus)
        return SymplecticTransform.from_matrix(J @ self.matrix.T @ (-J))

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        return symplectic_compose(self, other)


def symplectic_compose(T1: SymplecticTransform, T2: SymplecticTransform) -> SymplecticTransform:
    """Block-matrix product T1 T2 (T2 applied first under the Siegel action)."""
    if T1.genus != T2.genus:
        raise DimensionMismatch("cannot compose transforms of different genus")
    return SymplecticTransform.from_matrix(T1.matrix @ T2.matrix)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class MoebiusElement:
    """Rational 2x2 matrix with ad - bc > 0 acting on the upper half-plane.

    Stored primitively (integer entries with gcd 1), so that determinants of
    Gamma_0(N)+ elements come out in {1, N}.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        if self.det <= 0:
            raise DomainViolation("Moebius element needs ad - bc > 0")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @classmethod
    def of(cls, a, b, c, d) -> "MoebiusElement":
        a, b, c, d = (_as_fraction(x) for x in (a, b, c, d))
        den = math.lcm(*(f.denominator for f in (a, b, c, d)))
        ints = [int(f * den) for f in (a, b, c, d)]
        g = math.gcd(*ints)
        if g:
            ints = [x // g for x in ints]
        # fix the overall sign so the first nonzero entry is positive
        lead = next(x for x in ints if x != 0)
        if lead < 0:
            ints = [-x for x in ints]
        return cls(*(Fraction(x) for x in ints))

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls.of(1, 0, 0, 1)

    def apply(self, z: complex) -> complex:
        a, b, c, d = (float(self.a), float(self.b), float(self.c), float(self.d))
        return (a * z + b) / (c * z + d)

    def compose(self, other: "MoebiusElement") -> "MoebiusElement":
        """self after other: (self.compose(other)).apply == self.apply(other.apply(.))."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return MoebiusElement.of(a, b, c, d)

    def inverse(self) -> "MoebiusElement":
        return MoebiusElement.of(self.d, -self.b, -self.c, self.a)

    def same_action(self, other: "MoebiusElement") -> bool:
        """True when both act identically on the half-plane (equal up to scalar)."""
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)


@dataclass(frozen=True)
class TruncationPolicy:
    """Lattice truncation |m_i| <= N for theta series.

    In adaptive mode N grows (within [3, 12]) until the rigorous tail bound
    drops below tail_tol.
    """

    mode: str = "adaptive"
    N: int = 4
    tail_tol: float = 1e-16

    def __post_init__(self):
        if self.mode not in ("fixed", "adaptive"):
            raise DomainViolation("mode must be 'fixed' or 'adaptive'")
        if self.N < 1:
            raise DomainViolation("N must be >= 1")
        if not self.tail_tol > 0:
            raise DomainViolation("tail_tol must be positive")


@dataclass(frozen=True)
class RootOfUnity:
    """eps_k = exp(2 pi i / k)."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainViolation("k must be a positive integer")

    @property
    def value(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.k)

    def power(self, n: int) -> complex:
        return cmath.exp(2j * cmath.pi * n / self.k)
