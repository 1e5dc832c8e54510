"""Branch-point recovery and exact orbifold Euler-characteristic arithmetic.

Branch points come from fixed theta-constant quotients (a Rosenhain-type
convention); the convention is self-tested once per process against the
order-48 curve, whose branch points are Moebius-equivalent to
{0, inf, 1, i, -1, -i}.  All Euler arithmetic is exact rational.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (ConventionUnvalidated, DimensionMismatch, DomainViolation,
                   NoD3Structure, RationalValue, SiegelPoint, TruncationPolicy)
from .theta import theta_const
from .core import Characteristic

__all__ = [
    "INFINITY", "BranchPointSet", "MassTerm", "rosenhain_branch_points",
    "match_d3_normal_form", "D3Match", "mass_formula", "strata_euler",
    "fourth_point_forced", "mobius_equivalent_configs",
]

INFINITY = complex(math.inf, 0.0)
_EPS3 = np.exp(2j * np.pi / 3)


def is_infinite(z: complex) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


@dataclass(frozen=True)
class BranchPointSet:
    """Six pairwise-distinct points on the Riemann sphere (INFINITY allowed)."""

    points: tuple[complex, ...]

    def __post_init__(self):
        if len(self.points) != 6:
            raise DimensionMismatch("a genus-2 curve has six branch points")
        for a, b in itertools.combinations(self.points, 2):
            if is_infinite(a) and is_infinite(b):
                raise DomainViolation("branch points must be pairwise distinct")
            if not is_infinite(a) and not is_infinite(b) and abs(a - b) < 1e-8:
                raise DomainViolation("branch points must be pairwise distinct")


@dataclass(frozen=True)
class MassTerm:
    index: int               # Morse index of the critical orbit
    stabilizer_order: int
    label: str = ""

    def __post_init__(self):
        if self.stabilizer_order < 1:
            raise DomainViolation("stabilizer order must be >= 1")


# ---------------------------------------------------------------------------
# Moebius utilities


def _to_01inf(a: complex, b: complex, c: complex):
    """The Moebius map sending (a, b, c) to (0, 1, inf)."""
    def f(z: complex) -> complex:
        if is_infinite(c):
            if is_infinite(z):
                return INFINITY
            return (z - a) / (b - a)
        if is_infinite(a):
            if is_infinite(z):
                return 1.0 + 0j
            if abs(z - c) < 1e-300:
                return INFINITY
            return (b - c) / (z - c)
        if is_infinite(b):
            if is_infinite(z):
                return 1.0 + 0j
            if abs(z - c) < 1e-300:
                return INFINITY
            return (z - a) / (z - c)
        if is_infinite(z):
            return (b - c) / (b - a)
        if abs(z - c) < 1e-300:
            return INFINITY
        return ((z - a) * (b - c)) / ((z - c) * (b - a))
    return f


def _sorted_key(z: complex):
    if is_infinite(z):
        return (1, 0.0, 0.0)
    return (0, round(z.real, 9), round(z.imag, 9))


def mobius_equivalent_configs(A, B, tol: float = 1e-8) -> bool:
    """Moebius-equivalence of two six-point sphere configurations."""
    A = [complex(z) for z in A]
    B = [complex(z) for z in B]
    fB = _to_01inf(B[0], B[1], B[2])
    restB = sorted((fB(z) for z in B[3:]), key=_sorted_key)
    for (i, j, k) in itertools.permutations(range(6), 3):
        f = _to_01inf(A[i], A[j], A[k])
        rest = sorted((f(A[m]) for m in range(6) if m not in (i, j, k)), key=_sorted_key)
        ok = True
        for u, v in zip(rest, restB):
            if is_infinite(u) != is_infinite(v):
                ok = False
                break
            if not is_infinite(u) and abs(u - v) > tol:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Rosenhain recovery

# characteristic quotients used for (lambda1, lambda2, lambda3); the map is
# validated once per process against the Burnside configuration
_C = {
    1: Characteristic(2, (0.0, 0.0), (0.0, 0.0)),
    2: Characteristic(2, (0.0, 0.0), (0.5, 0.5)),
    3: Characteristic(2, (0.0, 0.0), (0.5, 0.0)),
    4: Characteristic(2, (0.0, 0.0), (0.0, 0.5)),
    8: Characteristic(2, (0.5, 0.5), (0.0, 0.0)),
    10: Characteristic(2, (0.5, 0.5), (0.5, 0.5)),
}

_BURNSIDE_CONFIG = (0j, INFINITY, 1 + 0j, 1j, -1 + 0j, -1j)
_convention_checked = False


def _raw_branch_points(B: SiegelPoint, policy: TruncationPolicy) -> BranchPointSet:
    t = {k: theta_const(ch, B, policy).value for k, ch in _C.items()}
    lam1 = (t[1] * t[3] / (t[2] * t[4])) ** 2
    lam2 = (t[3] * t[8] / (t[4] * t[10])) ** 2
    lam3 = (t[1] * t[8] / (t[2] * t[10])) ** 2
    return BranchPointSet((0j, 1 + 0j, INFINITY, lam1, lam2, lam3))


def rosenhain_branch_points(B: SiegelPoint, policy: TruncationPolicy | None = None
                            ) -> BranchPointSet:
    """Branch points {0, 1, inf, l1, l2, l3} of the curve with period matrix B.

    The theta-quotient convention is validated against the Burnside oracle the
    first time this runs in a process; an invalid convention is a hard error.
    """
    global _convention_checked
    policy = policy or TruncationPolicy()
    if B.genus != 2:
        raise DimensionMismatch("branch-point recovery is a genus-2 operation")
    if not _convention_checked:
        from .strata import burnside_point
        probe = _raw_branch_points(burnside_point(), policy)
        if not mobius_equivalent_configs(probe.points, _BURNSIDE_CONFIG, tol=1e-8):
            raise ConventionUnvalidated(
                "theta-quotient convention failed the Burnside branch-point oracle")
        _convention_checked = True
    return _raw_branch_points(B, policy)


# ---------------------------------------------------------------------------
# D3 normal form


@dataclass(frozen=True)
class D3Match:
    r: complex                # representative with |r| < 1
    r_inverse: complex        # the 1/r representative
    residual: float           # scatter of the cube invariants
    imag_residual: float      # |Im r| as matched, reported not assumed zero


def match_d3_normal_form(points: BranchPointSet, tol: float = 1e-6) -> D3Match:
    """Fit the configuration to {1, e3, e3^2} union r*{1, e3, e3^2}.

    Every ordered triple is sent to the first orbit by its unique Moebius map;
    the other three images must share a common cube, which is r^3.  The
    assignment with the smallest scatter wins; |r| < 1 fixes the r <-> 1/r
    ambiguity.
    """
    pts = [complex(z) for z in points.points]
    roots = (1 + 0j, _EPS3, _EPS3**2)

    def to_roots(w: complex) -> complex:
        # inverse of the normalization sending (1, e3, e3^2) -> (0, 1, inf)
        a, b, c = roots
        if is_infinite(w):
            return c
        num = c * (b - a) * w - a * (b - c)
        den = (b - a) * w - (b - c)
        if abs(den) < 1e-300:
            return INFINITY
        return num / den

    best: tuple[float, complex] | None = None
    for (i, j, k) in itertools.permutations(range(6), 3):
        f = _to_01inf(pts[i], pts[j], pts[k])
        images = [to_roots(f(pts[m])) for m in range(6) if m not in (i, j, k)]
        if any(is_infinite(u) for u in images):
            continue
        cubes = [u**3 for u in images]
        center = sum(cubes) / 3
        if abs(center) < 1e-12:
            continue
        resid = max(abs(cb - center) for cb in cubes) / max(abs(center), 1.0)
        if best is None or resid < best[0]:
            best = (resid, center)
    if best is None or best[0] > tol:
        raise NoD3Structure(
            f"no assignment matches the triangular normal form (best residual "
            f"{best[0] if best else math.inf:.3e})")
    resid, r3 = best
    r = complex(r3) ** (1 / 3)
    r_small, r_big = (r, 1 / r) if abs(r) <= 1 else (1 / r, r)
    return D3Match(r_small, r_big, float(resid), abs(r_small.imag))


# ---------------------------------------------------------------------------
# mass formulas (exact rationals throughout)


def mass_formula(terms: list[MassTerm] | tuple[MassTerm, ...],
                 hyperelliptic_double: bool = False) -> RationalValue:
    """Sum of (-1)^index / stabilizer_order, doubled for genus 1 and 2 where
    every curve carries the hyperelliptic involution."""
    total = sum((Fraction((-1) ** t.index, t.stabilizer_order) for t in terms),
                Fraction(0))
    return 2 * total if hyperelliptic_double else total


# normalizer-quotient orders #H and strata Morse indices per critical curve
_STRATA_DATA = {
    "d2": ((2, 2, "burnside"), (1, 1, "d6")),
    "d3": ((2, 1, "burnside"), (1, 2, "d6"), (1, 1, "d3_extremal")),
    "z2": ((4, 4, "burnside"), (2, 2, "d6"), (3, 1, "d3_extremal")),
}


def strata_euler(family: str) -> RationalValue:
    """Orbifold Euler characteristic of a symmetric stratum via the mass
    formula with normalizer-quotient stabilizer orders."""
    key = family.lower()
    if key not in _STRATA_DATA:
        raise DomainViolation("family must be one of 'z2', 'd2', 'd3'")
    terms = [MassTerm(index, order, label) for index, order, label in _STRATA_DATA[key]]
    return mass_formula(terms, hyperelliptic_double=False)


def full_moduli_euler() -> RationalValue:
    """The genus-2 mass formula over the four critical curves."""
    terms = [MassTerm(6, 48, "burnside"), MassTerm(3, 24, "d6"),
             MassTerm(4, 10, "z5"), MassTerm(5, 12, "d3_extremal")]
    return mass_formula(terms, hyperelliptic_double=True)


def genus1_euler() -> RationalValue:
    """Genus-1 mass formula: saddle at the square torus, maximum at the
    hexagonal one."""
    terms = [MassTerm(1, 4, "square"), MassTerm(2, 6, "hexagonal")]
    return mass_formula(terms, hyperelliptic_double=True)


def fourth_point_forced() -> bool:
    """No signed combination of the three large-automorphism masses alone
    reaches the known orbifold Euler characteristic, so a fourth critical
    orbit is forced."""
    target = Fraction(-1, 120)
    base = (Fraction(1, 48), Fraction(1, 24), Fraction(1, 10))
    for signs in itertools.product((1, -1), repeat=3):
        if 2 * sum(s * f for s, f in zip(signs, base)) == target:
            return False
    return True
