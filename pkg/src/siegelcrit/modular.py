"""Group actions and fundamental domains.

Sp(4,Z) acts on genus-2 period matrices by B -> (AB + B')(CB + D)^(-1).
The Gottschling fundamental domain is cut out by coordinate bounds, the
Minkowski ordering, and 19 modulus inequalities |det(C_k B + D_k)| >= 1;
violating one of the latter and applying the matching symplectic transform
strictly increases det Im B, which drives the reduction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (DimensionMismatch, DomainViolation, MoebiusElement,
                   NotInGroup, NotPositiveDefinite, ParityViolation,
                   ReductionStalled, SiegelPoint, SingularDenominator,
                   SymplecticTransform, make_siegel_point)

__all__ = [
    "DomainVerdict", "apply_symplectic", "gottschling_membership",
    "reduce_to_gottschling", "genus1_reduce", "fundamental_domain_contains",
    "embed_z2", "embed_d2", "embed_d3", "strata_homomorphism",
    "z2_pair_transform", "modular_equivalent", "congruence_transform",
    "translation_transform", "GENUS1_GROUPS",
]

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class DomainVerdict:
    inside: bool
    violated: tuple[int, ...]


# ---------------------------------------------------------------------------
# symplectic action


def apply_symplectic(T: SymplecticTransform, B: SiegelPoint) -> SiegelPoint:
    """(A B + B')(C B + D)^(-1), re-symmetrized against rounding skew."""
    if T.genus != B.genus:
        raise DimensionMismatch("transform and point genus differ")
    M = B.matrix
    den = T.C @ M + T.D
    det = np.linalg.det(den)
    if abs(det) < 1e-12:
        raise SingularDenominator(f"|det(CB + D)| = {abs(det):.3e}")
    out = (T.A @ M + T.B) @ np.linalg.inv(den)
    out = (out + out.T) / 2
    return SiegelPoint.from_matrix(out)


def congruence_transform(U: np.ndarray) -> SymplecticTransform:
    """Symplectic element acting as B -> U^t B U for unimodular U."""
    U = np.asarray(U, dtype=int)
    Ui = np.rint(np.linalg.inv(U)).astype(int)
    Z = np.zeros_like(U)
    return SymplecticTransform.from_blocks(U.T, Z, Z, Ui)


def translation_transform(S: np.ndarray) -> SymplecticTransform:
    """Symplectic element acting as B -> B + S for integer symmetric S."""
    S = np.asarray(S, dtype=int)
    I = np.eye(S.shape[0], dtype=int)
    return SymplecticTransform.from_blocks(I, S, 0 * I, I)


# ---------------------------------------------------------------------------
# Gottschling domain: 25 inequalities
#
# ids 1..3:  |x_i| <= 1/2
# id  4:     y2 >= 0
# ids 5..6:  Minkowski ordering y1 >= 2 y2, y3 >= y1
# ids 7..25: the 19 modulus inequalities (|B11|, |B22|, |B11+B22-2B12±1|,
#            and |det(B+S)| for the 15 distinct sign-resolved shapes S).
# The bounds y1, y3 >= sqrt(3)/2 printed alongside are implied by ids 1, 3,
# 7, 8 and carry no separate identifier.

_S_SHAPES: list[np.ndarray] = [np.zeros((2, 2), dtype=int)]
for _e in (1, -1):
    _S_SHAPES += [np.array(s, dtype=int) * _e for s in (
        [[1, 0], [0, 0]], [[0, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, -1]],
        [[0, 1], [1, 0]], [[1, 1], [1, 0]], [[0, 1], [1, 1]])]
_dedup: list[np.ndarray] = []
for _S in _S_SHAPES:
    if not any((_S == _T).all() for _T in _dedup):
        _dedup.append(_S)
_S_SHAPES = _dedup
assert len(_S_SHAPES) + 4 == 19, "modulus inequality count must be 19"


def _modulus_values(B: np.ndarray) -> np.ndarray:
    """The 19 modulus quantities, in identifier order 7..25."""
    base = [abs(B[0, 0]), abs(B[1, 1]),
            abs(B[0, 0] + B[1, 1] - 2 * B[0, 1] + 1),
            abs(B[0, 0] + B[1, 1] - 2 * B[0, 1] - 1)]
    dets = [abs(np.linalg.det(B + S)) for S in _S_SHAPES]
    return np.array(base + dets)


_M_INV11 = SymplecticTransform.from_matrix(
    np.array([[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]))
_M_INV22 = SymplecticTransform.from_matrix(
    np.array([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]]))
_V_SHEAR = np.array([[1, 0], [-1, 1]])


def _modulus_transform(idx: int) -> SymplecticTransform:
    """Symplectic transform whose application fixes modulus inequality idx (0-based)."""
    if idx == 0:
        return _M_INV11
    if idx == 1:
        return _M_INV22
    if idx in (2, 3):
        e = 1 if idx == 2 else -1
        shift = translation_transform(np.array([[e, 0], [0, 0]]))
        return _M_INV11 @ shift @ congruence_transform(_V_SHEAR)
    S = _S_SHAPES[idx - 4]
    I = np.eye(2, dtype=int)
    return SymplecticTransform.from_blocks(0 * I, -I, I, S)


_MODULUS_TRANSFORMS = [_modulus_transform(i) for i in range(19)]


def gottschling_membership(B: SiegelPoint, tol: float = BOUNDARY_TOL) -> DomainVerdict:
    """Check the 25 Gottschling inequalities with boundary slack tol."""
    if B.genus != 2:
        raise DimensionMismatch("the Gottschling domain is a genus-2 object")
    x1, x2, x3, y1, y2, y3 = B.coords
    violated: list[int] = []
    for i, xv in enumerate((x1, x2, x3), start=1):
        if abs(xv) > 0.5 + tol:
            violated.append(i)
    if y2 < -tol:
        violated.append(4)
    if y1 < 2 * y2 - tol:
        violated.append(5)
    if y3 < y1 - tol:
        violated.append(6)
    vals = _modulus_values(B.matrix)
    for i, v in enumerate(vals, start=7):
        if v < 1 - tol:
            violated.append(i)
    return DomainVerdict(not violated, tuple(violated))


def _minkowski_U(Y: np.ndarray) -> np.ndarray:
    """Unimodular U with U^t Y U satisfying 2|y2| <= y1 <= y3, y2 >= 0."""
    U = np.eye(2, dtype=int)
    for _ in range(200):
        Yr = U.T @ Y @ U
        if Yr[0, 0] > Yr[1, 1]:
            U = U @ np.array([[0, 1], [1, 0]])
            continue
        r = round(Yr[0, 1] / Yr[0, 0])
        if r != 0:
            U = U @ np.array([[1, -r], [0, 1]])
            continue
        break
    if (U.T @ Y @ U)[0, 1] < 0:
        U = U @ np.array([[1, 0], [0, -1]])
    return U


def reduce_to_gottschling(B: SiegelPoint, max_iter: int = 10_000
                          ) -> tuple[SiegelPoint, SymplecticTransform]:
    """Reduce into the closed Gottschling domain; returns (B', T) with B' = T.B.

    Alternates Minkowski reduction of Im B, integer translation of Re B, and
    the generalized inversion attached to the first violated modulus
    inequality (which strictly increases det Im B).
    """
    if B.genus != 2:
        raise DimensionMismatch("reduction is a genus-2 operation")
    T = SymplecticTransform.identity(2)
    cur = B
    for _ in range(max_iter):
        U = _minkowski_U(cur.imag_matrix)
        if not np.array_equal(U, np.eye(2, dtype=int)):
            M = congruence_transform(U)
            cur, T = apply_symplectic(M, cur), M @ T
        X = cur.matrix.real
        S = -np.rint([[X[0, 0], X[0, 1]], [X[0, 1], X[1, 1]]]).astype(int)
        if S.any():
            M = translation_transform(S)
            cur, T = apply_symplectic(M, cur), M @ T
        vals = _modulus_values(cur.matrix)
        bad = np.nonzero(vals < 1 - BOUNDARY_TOL)[0]
        if bad.size == 0:
            if gottschling_membership(cur).inside:
                return cur, T
            continue
        M = _MODULUS_TRANSFORMS[int(bad[0])]
        cur, T = apply_symplectic(M, cur), M @ T
    raise ReductionStalled(f"no fundamental-domain representative after {max_iter} iterations")


# ---------------------------------------------------------------------------
# genus-1 fundamental domains and reduction

GENUS1_GROUPS = ("gamma", "gamma2", "gamma0_2plus", "gamma0_3plus")


def _normalize_group(group: str) -> str:
    key = group.lower().replace("(", "").replace(")", "").replace("+", "plus").replace(" ", "")
    aliases = {
        "gamma": "gamma", "sl2z": "gamma",
        "gamma2": "gamma2",
        "gamma02plus": "gamma0_2plus", "gamma0_2plus": "gamma0_2plus",
        "gamma03plus": "gamma0_3plus", "gamma0_3plus": "gamma0_3plus",
    }
    if key not in aliases:
        raise DomainViolation(f"unknown group {group!r}; choose from {GENUS1_GROUPS}")
    return aliases[key]


def fundamental_domain_contains(sigma: complex, group: str, tol: float = 1e-12) -> bool:
    """Membership in Omega, Omega(2), Omega_0(2)+ or Omega_0(3)+."""
    s = complex(sigma)
    g = _normalize_group(group)
    if g == "gamma":
        return abs(s.real) <= 0.5 + tol and abs(s) >= 1 - tol
    if g == "gamma2":
        return (abs(s.real) <= 1 + tol and abs(s - 0.5) >= 0.5 - tol
                and abs(s + 0.5) >= 0.5 - tol)
    n = 2 if g == "gamma0_2plus" else 3
    r = 1 / math.sqrt(n)
    return (-tol <= s.real <= 1 + tol and abs(s) >= r - tol and abs(s - 1) >= r - tol)


# generators of the plus-groups, used both for reduction and for the
# homomorphisms into Sp(4,Z): gamma1 is the unit translation, gamma2 the
# composite of the Fricke involution with it.
_PLUS_GENERATORS = {
    2: (MoebiusElement.of(1, 1, 0, 1), MoebiusElement.of(2, -1, 2, 0)),
    3: (MoebiusElement.of(1, 1, 0, 1), MoebiusElement.of(3, -1, 3, 0)),
}


def _reduce_plus_group(sigma: complex, n: int, max_iter: int
                       ) -> tuple[complex, MoebiusElement, list[tuple[int, int]]]:
    """Reduce into Omega_0(n)+; also returns the word applied as
    [(generator index, power), ...] with index 1 or 2."""
    g1, g2 = _PLUS_GENERATORS[n]
    r2 = 1 / n  # squared circle radius
    s = complex(sigma)
    acc = MoebiusElement.identity()
    word: list[tuple[int, int]] = []
    for _ in range(max_iter):
        k = math.floor(s.real)
        if k != 0:
            s = s - k
            step = MoebiusElement.of(1, -k, 0, 1)
            acc = step.compose(acc)
            word.append((1, -k))
            continue
        if abs(s) ** 2 < r2 * (1 - 1e-15):
            # Fricke inversion around 0: gamma1^(-1) gamma2
            step = g1.inverse().compose(g2)
            s = step.apply(s)
            acc = step.compose(acc)
            word.extend([(2, 1), (1, -1)])
            continue
        if abs(s - 1) ** 2 < r2 * (1 - 1e-15):
            step = g2.inverse()
            s = step.apply(s)
            acc = step.compose(acc)
            word.append((2, -1))
            continue
        return s, acc, word
    raise ReductionStalled("genus-1 plus-group reduction exceeded the iteration cap")


def _reduce_gamma(sigma: complex, max_iter: int) -> tuple[complex, MoebiusElement]:
    s = complex(sigma)
    acc = MoebiusElement.identity()
    for _ in range(max_iter):
        k = round(s.real)
        if k != 0:
            s -= k
            acc = MoebiusElement.of(1, -k, 0, 1).compose(acc)
            continue
        if abs(s) < 1 - 1e-15:
            s = -1 / s
            acc = MoebiusElement.of(0, -1, 1, 0).compose(acc)
            continue
        return s, acc
    raise ReductionStalled("modular reduction exceeded the iteration cap")


def _reduce_gamma2(sigma: complex, max_iter: int) -> tuple[complex, MoebiusElement]:
    s = complex(sigma)
    acc = MoebiusElement.identity()
    for _ in range(max_iter):
        k = round(s.real / 2)
        if k != 0:
            s -= 2 * k
            acc = MoebiusElement.of(1, -2 * k, 0, 1).compose(acc)
            continue
        if abs(2 * s + 1) < 1 - 1e-15:   # inside |s + 1/2| < 1/2
            step = MoebiusElement.of(1, 0, 2, 1)
            s = step.apply(s)
            acc = step.compose(acc)
            continue
        if abs(2 * s - 1) < 1 - 1e-15:   # inside |s - 1/2| < 1/2
            step = MoebiusElement.of(1, 0, -2, 1)
            s = step.apply(s)
            acc = step.compose(acc)
            continue
        return s, acc
    raise ReductionStalled("Gamma(2) reduction exceeded the iteration cap")


def genus1_reduce(sigma: complex, group: str, max_iter: int = 10_000
                  ) -> tuple[complex, MoebiusElement]:
    """Map sigma into the group's fundamental domain; returns (sigma', element).

    The returned element g satisfies g(sigma) = sigma'.
    """
    if complex(sigma).imag <= 0:
        raise DomainViolation("sigma must lie in the upper half-plane")
    g = _normalize_group(group)
    if g == "gamma":
        return _reduce_gamma(sigma, max_iter)
    if g == "gamma2":
        return _reduce_gamma2(sigma, max_iter)
    n = 2 if g == "gamma0_2plus" else 3
    s, acc, _ = _reduce_plus_group(sigma, n, max_iter)
    return s, acc


# ---------------------------------------------------------------------------
# strata embeddings


def embed_z2(x: complex, y: complex) -> SiegelPoint:
    """(1/2) [[x+y, x-y], [x-y, x+y]]; NotPositiveDefinite when Im fails."""
    x, y = complex(x), complex(y)
    M = 0.5 * np.array([[x + y, x - y], [x - y, x + y]])
    return SiegelPoint.from_matrix(M)


def embed_d2(x: complex) -> SiegelPoint:
    """[[x - 1/2, 1/2], [1/2, x - 1/2]]; equals embed_z2(x, x-1)."""
    x = complex(x)
    if x.imag <= 0:
        raise DomainViolation("x must lie in the upper half-plane")
    return SiegelPoint.from_matrix(np.array([[x - 0.5, 0.5], [0.5, x - 0.5]]))


def embed_d3(sigma: complex) -> SiegelPoint:
    """[[2 sigma, sigma], [sigma, 2 sigma]]; equals embed_z2(3 sigma, sigma)."""
    s = complex(sigma)
    if s.imag <= 0:
        raise DomainViolation("sigma must lie in the upper half-plane")
    return SiegelPoint.from_matrix(np.array([[2 * s, s], [s, 2 * s]]))


# ---------------------------------------------------------------------------
# homomorphisms into Sp(4,Z)


def z2_pair_transform(gamma1: MoebiusElement, gamma2: MoebiusElement) -> SymplecticTransform:
    """The symplectic element acting as (x, y) -> (gamma1 x, gamma2 y) on the
    z2 family; requires gamma1 - gamma2 to have even entries."""
    for g in (gamma1, gamma2):
        if g.det != 1:
            raise DomainViolation("pair elements must be unimodular")
    k1, l1, m1, n1 = (int(v) for v in (gamma1.a, gamma1.b, gamma1.c, gamma1.d))
    k2, l2, m2, n2 = (int(v) for v in (gamma2.a, gamma2.b, gamma2.c, gamma2.d))
    diffs = (k1 - k2, l1 - l2, m1 - m2, n1 - n2)
    if any(d % 2 for d in diffs):
        raise ParityViolation("gamma1 - gamma2 has an odd entry")
    M = np.array([
        [k1 + k2, k1 - k2, l1 + l2, l1 - l2],
        [k1 - k2, k1 + k2, l1 - l2, l1 + l2],
        [m1 + m2, m1 - m2, n1 + n2, n1 - n2],
        [m1 - m2, m1 + m2, n1 - n2, n1 + n2]]) // 2
    return SymplecticTransform.from_matrix(M)


# generator images under the homomorphisms Gamma_0(N)+ -> Sp(4,Z)
_GEN_IMAGES = {
    2: (SymplecticTransform.from_matrix(np.array(
            [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])),
        SymplecticTransform.from_matrix(np.array(
            [[0, -1, 1, 0], [0, -1, 0, 0], [-1, -1, 0, 0], [1, -1, 1, -1]]))),
    3: (SymplecticTransform.from_matrix(np.array(
            [[1, 0, 2, 1], [0, 1, 1, 2], [0, 0, 1, 0], [0, 0, 0, 1]])),
        SymplecticTransform.from_matrix(np.array(
            [[-2, 1, 1, 0], [-1, 2, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]]))),
}

_BASEPOINT = {2: 0.353 + 0.911j, 3: 0.291 + 0.737j}


def strata_homomorphism(family: str, gamma: MoebiusElement,
                        word_cap: int = 4_000) -> SymplecticTransform:
    """Image of gamma in Sp(4,Z) for the d2 or d3 family.

    gamma is decomposed as a word in the two group generators by reducing the
    image of a generic interior basepoint; the generator images are then
    multiplied out.
    """
    family = family.lower()
    if family not in ("d2", "d3"):
        raise DomainViolation("family must be 'd2' or 'd3'")
    n = 2 if family == "d2" else 3
    z0 = _BASEPOINT[n]
    try:
        z1 = gamma.apply(z0)
    except ZeroDivisionError as exc:
        raise NotInGroup("element does not act on the half-plane") from exc
    s, acc, word = _reduce_plus_group(z1, n, word_cap)
    if abs(s - z0) > 1e-9:
        raise NotInGroup(f"element is not a word in the Gamma_0({n})+ generators")
    if not acc.compose(gamma).same_action(MoebiusElement.identity()):
        raise NotInGroup("reduction word does not invert the element exactly")
    # acc(gamma(z)) = z, so gamma = acc^(-1); the word lists acc's factors in
    # application order, i.e. acc = word[-1] ... word[0].
    T1, T2 = _GEN_IMAGES[n]
    images = {1: T1, 2: T2}
    out = SymplecticTransform.identity(2)
    for gen, power in word:
        img = images[gen] if power > 0 else images[gen].inverse()
        for _ in range(abs(power)):
            out = out @ img   # inverse word, built left to right
    return out.inverse()


# ---------------------------------------------------------------------------
# modular equivalence of genus-2 points


def _mirror(B: SiegelPoint) -> SiegelPoint:
    return SiegelPoint.from_matrix(-np.conj(B.matrix))


def modular_equivalent(B1: SiegelPoint, B2: SiegelPoint, policy=None,
                       coord_tol: float = 1e-6,
                       ) -> tuple[bool, SymplecticTransform | None]:
    """Decide Sp(4,Z)-equivalence of two genus-2 points.

    Reduces both to the fundamental domain and compares coordinates; on the
    boundary the reduced representative is not unique, so the mirror
    -conj(B) (same functional value, paper-identified on the boundary) and
    finally the invariant pair (big_f, det Im after reduction) are consulted.
    Returns (equivalent, witness); the witness maps B1 to B2 when the match
    was by coordinates.
    """
    from .functional import big_f  # local import to avoid a cycle

    r1, T1 = reduce_to_gottschling(B1)
    r2, T2 = reduce_to_gottschling(B2)
    if np.abs(r1.coords - r2.coords).max() <= coord_tol:
        return True, T2.inverse() @ T1
    rm, _ = reduce_to_gottschling(_mirror(r1))
    if np.abs(rm.coords - r2.coords).max() <= coord_tol:
        return True, None
    f1, f2 = big_f(r1, policy), big_f(r2, policy)
    d1, d2 = (float(np.linalg.det(r.imag_matrix)) for r in (r1, r2))
    scale = max(abs(f1), abs(f2), 1e-30)
    if abs(f1 - f2) <= 1e-6 * scale and abs(d1 - d2) <= 1e-6 * max(d1, d2):
        return True, None
    return False, None
