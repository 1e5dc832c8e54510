"""Theta constants with characteristics and their period derivatives.

Genus 1 and 2 only, by direct lattice sums

    Theta[p;q](0|B) = sum_m exp( pi*i <B(m+p), m+p> + 2*pi*i <m+p, q> ),

truncated to |m_i| <= N.  The omitted tail is bounded rigorously: with
lambda the smallest eigenvalue of Im B, every term of a shell
||m||_inf = k > N is at most exp(-pi*lambda*(k-1/2)^2), and the shell has
8k points (genus 2) or 2 points (genus 1).
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (Characteristic, DimensionMismatch, SiegelPoint,
                   TruncationFailure, TruncationPolicy)

__all__ = [
    "ThetaValue", "theta_const", "theta_deriv", "dedekind_eta",
    "enumerate_even_characteristics", "enumerate_odd_characteristics",
    "jacobi_theta",
]

ADAPTIVE_MIN_N = 3
ADAPTIVE_MAX_N = 12


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    terms_used: int
    tail_bound: float


def enumerate_even_characteristics(genus: int) -> list[Characteristic]:
    """All even characteristics, lexicographic in the (p, q) bit pattern."""
    if genus not in (1, 2):
        raise DimensionMismatch("only genus 1 and 2 are supported")
    out = []
    for bits in itertools.product((0.0, 0.5), repeat=2 * genus):
        c = Characteristic(genus, bits[:genus], bits[genus:])
        if c.is_even:
            out.append(c)
    return out


def enumerate_odd_characteristics(genus: int) -> list[Characteristic]:
    if genus not in (1, 2):
        raise DimensionMismatch("only genus 1 and 2 are supported")
    out = []
    for bits in itertools.product((0.0, 0.5), repeat=2 * genus):
        c = Characteristic(genus, bits[:genus], bits[genus:])
        if not c.is_even:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# tail bounds and truncation choice


def _tail_bound(lam: float, N: int, genus: int, deriv: bool = False) -> float:
    """Upper bound for the omitted |m|_inf > N part of the series."""
    if lam <= 0:
        return math.inf
    total = 0.0
    k = N + 1
    while k < N + 400:
        count = 8 * k if genus == 2 else 2
        term = count * math.exp(-math.pi * lam * (k - 0.5) ** 2)
        if deriv:
            term *= 2 * math.pi * (k + 0.5) ** 2
        total += term
        if term < 1e-320 or term < total * 1e-18:
            break
        k += 1
    return total


def _smallest_eigenvalue(Y: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(Y)[0])


def _choose_N(lam: float, policy: TruncationPolicy, genus: int, deriv: bool) -> tuple[int, float]:
    if policy.mode == "fixed":
        return policy.N, _tail_bound(lam, policy.N, genus, deriv)
    for N in range(ADAPTIVE_MIN_N, ADAPTIVE_MAX_N + 1):
        bound = _tail_bound(lam, N, genus, deriv)
        if bound < policy.tail_tol:
            return N, bound
    raise TruncationFailure(
        f"tail bound {bound:.3e} above {policy.tail_tol:.1e} even at N = {ADAPTIVE_MAX_N} "
        f"(smallest eigenvalue of Im B is {lam:.3e})")


# ---------------------------------------------------------------------------
# genus-1 series (array-capable in tau; used heavily by the strata scans)


@functools.lru_cache(maxsize=64)
def _range(N: int) -> np.ndarray:
    return np.arange(-N, N + 1, dtype=float)


def _theta1_series(p: float, q: float, tau, N: int):
    """theta[p;q](0|tau) by direct sum; tau may be an ndarray."""
    n = _range(N) + p
    tau = np.asarray(tau, dtype=complex)
    expo = 1j * np.pi * np.multiply.outer(tau, n**2) + 2j * np.pi * n * q
    return np.exp(expo).sum(axis=-1)


def _theta1_tau_deriv(p: float, q: float, tau, N: int):
    """d/dtau of theta[p;q](0|tau)."""
    n = _range(N) + p
    tau = np.asarray(tau, dtype=complex)
    expo = 1j * np.pi * np.multiply.outer(tau, n**2) + 2j * np.pi * n * q
    return (1j * np.pi * n**2 * np.exp(expo)).sum(axis=-1)


def _auto_N1(im_min: float, tol: float = 1e-16) -> int:
    """Smallest N with the genus-1 tail below tol at Im tau = im_min (unclamped)."""
    target = -math.log(tol / 4.0)
    return max(ADAPTIVE_MIN_N, int(math.ceil(math.sqrt(target / (math.pi * im_min)) + 0.5)) + 1)


_JACOBI_PQ = {2: (0.5, 0.0), 3: (0.0, 0.0), 4: (0.0, 0.5)}


def jacobi_theta(kind: int, tau, N: int | None = None):
    """Standard theta constants: kind 2 is [1/2;0], 3 is [0;0], 4 is [0;1/2].

    Accepts scalar or ndarray tau; N defaults to an Im-dependent choice that
    reaches machine precision.
    """
    if kind not in _JACOBI_PQ:
        raise DimensionMismatch("kind must be 2, 3 or 4")
    if N is None:
        im_min = float(np.min(np.asarray(tau).imag))
        N = _auto_N1(im_min)
    p, q = _JACOBI_PQ[kind]
    return _theta1_series(p, q, tau, N)


def _eta_log_deriv(tau, terms: int = 80):
    """eta'(tau)/eta(tau) from the q-product."""
    tau = np.asarray(tau, dtype=complex)
    n = np.arange(1, terms, dtype=float)
    qn = np.exp(2j * np.pi * np.multiply.outer(tau, n))
    return 1j * np.pi / 12 + (-2j * np.pi * n * qn / (1 - qn)).sum(axis=-1)


def dedekind_eta(tau, terms: int | None = None):
    """Dedekind eta by the q-product e^(pi i tau/12) prod (1 - e^(2 pi i n tau)).

    Only |eta| feeds the functionals downstream, but the value returned is the
    standard product branch.  Scalar or ndarray tau.
    """
    tau_arr = np.asarray(tau, dtype=complex)
    if np.min(tau_arr.imag) <= 0:
        raise DimensionMismatch("tau must lie in the upper half-plane")
    if terms is None:
        # |q^n| = exp(-2 pi n Im tau); stop once below 1e-18
        terms = max(5, int(18 * math.log(10) / (2 * math.pi * float(np.min(tau_arr.imag)))) + 2)
    n = np.arange(1, terms + 1, dtype=float)
    qn = np.exp(2j * np.pi * np.multiply.outer(tau_arr, n))
    out = np.exp(1j * np.pi * tau_arr / 12) * np.prod(1 - qn, axis=-1)
    return complex(out) if np.isscalar(tau) or np.asarray(tau).ndim == 0 else out


# ---------------------------------------------------------------------------
# genus-2 series


@functools.lru_cache(maxsize=64)
def _lattice2(N: int) -> tuple[np.ndarray, np.ndarray]:
    m1, m2 = np.meshgrid(np.arange(-N, N + 1, dtype=float),
                         np.arange(-N, N + 1, dtype=float), indexing="ij")
    return m1.ravel(), m2.ravel()


def _theta2_terms(char: Characteristic, B: np.ndarray, N: int) -> tuple[np.ndarray, ...]:
    m1, m2 = _lattice2(N)
    n1 = m1 + char.p[0]
    n2 = m2 + char.p[1]
    expo = (1j * np.pi * (B[0, 0] * n1**2 + 2 * B[0, 1] * n1 * n2 + B[1, 1] * n2**2)
            + 2j * np.pi * (n1 * char.q[0] + n2 * char.q[1]))
    return n1, n2, np.exp(expo)


def theta_const(char: Characteristic, B: SiegelPoint, policy: TruncationPolicy | None = None) -> ThetaValue:
    """Theta constant with characteristic at the period matrix B (genus 1 or 2)."""
    policy = policy or TruncationPolicy()
    if char.genus != B.genus:
        raise DimensionMismatch("characteristic and point genus differ")
    if B.genus == 1:
        lam = B.imag_matrix[0, 0]
        N, bound = _choose_N(lam, policy, 1, deriv=False)
        val = complex(_theta1_series(char.p[0], char.q[0], B.entries[0], N))
        return ThetaValue(val, 2 * N + 1, bound)
    if B.genus != 2:
        raise DimensionMismatch("only genus 1 and 2 are supported")
    lam = _smallest_eigenvalue(B.imag_matrix)
    N, bound = _choose_N(lam, policy, 2, deriv=False)
    _, _, terms = _theta2_terms(char, B.matrix, N)
    return ThetaValue(complex(terms.sum()), (2 * N + 1) ** 2, bound)


def theta_deriv(char: Characteristic, B: SiegelPoint, j: int, k: int,
                policy: TruncationPolicy | None = None) -> ThetaValue:
    """d Theta / d B_jk treating the off-diagonal entry as one coordinate.

    Each lattice term carries the prefactor
    2*pi*i (m_j+p_j)(m_k+p_k) / (1 + delta_jk); indexes j, k are 1-based.
    """
    policy = policy or TruncationPolicy()
    if char.genus != 2 or B.genus != 2:
        raise DimensionMismatch("theta_deriv is a genus-2 operation")
    if j not in (1, 2) or k not in (1, 2):
        raise DimensionMismatch("indices must lie in {1, 2}")
    lam = _smallest_eigenvalue(B.imag_matrix)
    N, bound = _choose_N(lam, policy, 2, deriv=True)
    n1, n2, terms = _theta2_terms(char, B.matrix, N)
    nn = {1: n1, 2: n2}
    pref = 2j * np.pi * nn[j] * nn[k] / (1 + (1 if j == k else 0))
    return ThetaValue(complex((pref * terms).sum()), (2 * N + 1) ** 2, bound)


# ---------------------------------------------------------------------------
# batched genus-2 evaluation over many period matrices (used by the scans)


def _theta2_batch(Bflat: np.ndarray, N: int, want_derivs: bool) -> tuple[np.ndarray, np.ndarray | None]:
    """Theta values (and the three derivatives) for all 10 even characteristics.

    Bflat has shape (n, 3) holding (B11, B12, B22).  Returns values with shape
    (10, n) and derivs with shape (10, 3, n) ordered (d11, d12, d22).
    """
    m1, m2 = _lattice2(N)
    chars = enumerate_even_characteristics(2)
    nvals = np.empty((10, Bflat.shape[0]), dtype=complex)
    dvals = np.empty((10, 3, Bflat.shape[0]), dtype=complex) if want_derivs else None
    B11 = Bflat[:, 0][:, None]
    B12 = Bflat[:, 1][:, None]
    B22 = Bflat[:, 2][:, None]
    for s, ch in enumerate(chars):
        n1 = m1 + ch.p[0]
        n2 = m2 + ch.p[1]
        expo = (1j * np.pi * (B11 * n1**2 + 2 * B12 * n1 * n2 + B22 * n2**2)
                + 2j * np.pi * (n1 * ch.q[0] + n2 * ch.q[1]))
        t = np.exp(expo)
        nvals[s] = t.sum(axis=-1)
        if want_derivs:
            dvals[s, 0] = (1j * np.pi * n1**2 * t).sum(axis=-1)
            dvals[s, 1] = (2j * np.pi * n1 * n2 * t).sum(axis=-1)
            dvals[s, 2] = (1j * np.pi * n2**2 * t).sum(axis=-1)
    return nvals, dvals
