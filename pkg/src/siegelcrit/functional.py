"""The modular functionals.

big_f is the genus-2 functional (det Im B)^(5/2) * prod over the ten even
theta constants of |Theta|; small_f is its genus-1 analog
(Im sigma)^(1/2) |eta(sigma)|^2.  The one- and two-parameter symmetric-family
restrictions f_z2 / f_d2 / f_d3 are closed forms in genus-1 theta constants
that agree with big_f composed with the corresponding period-matrix
embeddings (modular.embed_*) to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (Characteristic, DegenerateValue, DimensionMismatch,
                   DomainViolation, SiegelPoint, TruncationPolicy)
from .theta import (_eta_log_deriv, _theta1_series, _theta1_tau_deriv,
                    _theta2_batch, _auto_N1, dedekind_eta,
                    enumerate_even_characteristics, jacobi_theta, theta_const,
                    theta_deriv)

__all__ = [
    "StrataCoordinates", "big_f", "grad_big_f", "small_f", "j_invariant",
    "f_z2", "f_d2", "f_d3", "theta_prym_split", "inverse_binary_addition_check",
    "grad_log_small_f", "grad_log_f_z2", "grad_log_f_d2", "grad_log_f_d3",
]

# Closed-form prefactors calibrated so that each strata formula equals big_f
# on the nose (with the q-product eta and no spare constants): 16 * (1/4, 1/4, 3/4).
_Z2_PREFACTOR = 4.0
_D2_PREFACTOR = 4.0
_D3_PREFACTOR = 12.0


@dataclass(frozen=True)
class StrataCoordinates:
    """Coordinates on one of the symmetric families.

    family 'z2' carries two half-plane moduli (x, y); 'd2' and 'd3' carry a
    single modulus stored in x.
    """

    family: str
    x: complex
    y: complex | None = None

    def __post_init__(self):
        if self.family not in ("z2", "d2", "d3"):
            raise DomainViolation("family must be one of 'z2', 'd2', 'd3'")
        if self.x.imag <= 0 or (self.y is not None and self.y.imag <= 0):
            raise DomainViolation("strata coordinates must lie in the upper half-plane")
        if (self.family == "z2") != (self.y is not None):
            raise DomainViolation("exactly the z2 family carries a second coordinate")


_EVEN2 = enumerate_even_characteristics(2)


def big_f(B: SiegelPoint, policy: TruncationPolicy | None = None) -> float:
    """(det Im B)^(5/2) times the product of the ten even |Theta|."""
    if B.genus != 2:
        raise DimensionMismatch("big_f is defined on genus-2 points")
    policy = policy or TruncationPolicy()
    det = float(np.linalg.det(B.imag_matrix))
    prod = 1.0
    for ch in _EVEN2:
        prod *= abs(theta_const(ch, B, policy).value)
    return det**2.5 * prod


def grad_big_f(B: SiegelPoint, policy: TruncationPolicy | None = None) -> np.ndarray:
    """Gradient of big_f in the coordinates (x1, x2, x3, y1, y2, y3).

    Assembled by logarithmic differentiation: the theta part contributes
    Re/Im of sum_s Theta'_jk/Theta_s, the determinant part (5/2) d log det Im B.
    """
    if B.genus != 2:
        raise DimensionMismatch("grad_big_f is defined on genus-2 points")
    policy = policy or TruncationPolicy()
    F = big_f(B, policy)
    if F < 1e-300:
        raise DegenerateValue("big_f vanishes to machine precision; log-derivative undefined")
    r = np.zeros(3, dtype=complex)  # sum of Theta'/Theta for (1,1), (1,2), (2,2)
    for ch in _EVEN2:
        t = theta_const(ch, B, policy).value
        for i, (j, k) in enumerate(((1, 1), (1, 2), (2, 2))):
            r[i] += theta_deriv(ch, B, j, k, policy).value / t
    Yi = np.linalg.inv(B.imag_matrix)
    return F * np.array([
        r[0].real, r[1].real, r[2].real,
        2.5 * Yi[0, 0] - r[0].imag,
        5.0 * Yi[0, 1] - r[1].imag,
        2.5 * Yi[1, 1] - r[2].imag,
    ])


def _coords_to_flat(v: np.ndarray) -> np.ndarray:
    """(..., 6) real coordinates -> (..., 3) complex upper triangle."""
    v = np.asarray(v, dtype=float)
    return v[..., :3] + 1j * v[..., 3:]


def batched_grad_norm(coords: np.ndarray, N: int) -> np.ndarray:
    """|grad big_f| on an (n, 6) array of coordinate rows, fixed truncation N.

    Rows must already have Im B positive definite.
    """
    flat = _coords_to_flat(coords)
    vals, ders = _theta2_batch(flat, N, want_derivs=True)
    ratios = (ders / vals[:, None, :]).sum(axis=0)  # (3, n)
    y1, y2, y3 = coords[:, 3], coords[:, 4], coords[:, 5]
    det = y1 * y3 - y2**2
    prod = np.abs(vals).prod(axis=0)
    F = det**2.5 * prod
    g = np.stack([
        ratios[0].real, ratios[1].real, ratios[2].real,
        2.5 * y3 / det - ratios[0].imag,
        -5.0 * y2 / det - ratios[1].imag,
        2.5 * y1 / det - ratios[2].imag,
    ])
    return F * np.sqrt((g**2).sum(axis=0))


def small_f(sigma: complex) -> float:
    """(Im sigma)^(1/2) |eta(sigma)|^2, the genus-1 functional."""
    sigma = complex(sigma)
    if sigma.imag <= 0:
        raise DomainViolation("sigma must lie in the upper half-plane")
    return float(np.sqrt(sigma.imag) * abs(dedekind_eta(sigma)) ** 2)


def j_invariant(sigma: complex) -> complex:
    """(t2^8 + t3^8 + t4^8)^3 / (54 t2^8 t3^8 t4^8), normalized to J(i) = 1."""
    sigma = complex(sigma)
    if sigma.imag <= 0:
        raise DomainViolation("sigma must lie in the upper half-plane")
    t2 = jacobi_theta(2, sigma) ** 8
    t3 = jacobi_theta(3, sigma) ** 8
    t4 = jacobi_theta(4, sigma) ** 8
    return complex((t2 + t3 + t4) ** 3 / (54 * t2 * t3 * t4))


def _wronskian_z2(x, y, N_x: int, N_y: int):
    return (jacobi_theta(3, x, N_x) ** 4 * jacobi_theta(4, y, N_y) ** 4
            - jacobi_theta(4, x, N_x) ** 4 * jacobi_theta(3, y, N_y) ** 4)


def f_z2(x: complex, y: complex, policy: TruncationPolicy | None = None) -> float:
    """Two-modulus closed form of big_f on the z2 family; symmetric in x, y."""
    x, y = complex(x), complex(y)
    if x.imag <= 0 or y.imag <= 0:
        raise DomainViolation("x and y must lie in the upper half-plane")
    W = _wronskian_z2(x, y, _auto_N1(x.imag), _auto_N1(y.imag))
    return float(_Z2_PREFACTOR * small_f(x) ** 3 * small_f(y) ** 3
                 * x.imag * y.imag * abs(W))


def f_d2(x: complex, policy: TruncationPolicy | None = None) -> float:
    """One-modulus closed form of big_f on the d2 family."""
    x = complex(x)
    if x.imag <= 0:
        raise DomainViolation("x must lie in the upper half-plane")
    N = _auto_N1(x.imag)
    W = jacobi_theta(4, x, N) ** 8 - jacobi_theta(3, x, N) ** 8
    return float(_D2_PREFACTOR * small_f(x) ** 6 * x.imag**2 * abs(W))


def f_d3(sigma: complex, policy: TruncationPolicy | None = None) -> float:
    """One-modulus closed form of big_f on the d3 family (moduli sigma, 3*sigma)."""
    s = complex(sigma)
    if s.imag <= 0:
        raise DomainViolation("sigma must lie in the upper half-plane")
    N1, N3 = _auto_N1(s.imag), _auto_N1(3 * s.imag)
    W = (jacobi_theta(4, s, N1) ** 4 * jacobi_theta(3, 3 * s, N3) ** 4
         - jacobi_theta(3, s, N1) ** 4 * jacobi_theta(4, 3 * s, N3) ** 4)
    return float(_D3_PREFACTOR * small_f(s) ** 3 * small_f(3 * s) ** 3 * s.imag**2 * abs(W))


def strata_value(coords: StrataCoordinates, policy: TruncationPolicy | None = None) -> float:
    if coords.family == "z2":
        return f_z2(coords.x, coords.y, policy)
    if coords.family == "d2":
        return f_d2(coords.x, policy)
    return f_d3(coords.x, policy)


# ---------------------------------------------------------------------------
# reduction identities


def theta_prym_split(a: float, b: float, c: float, d: float, x: complex, y: complex,
                     policy: TruncationPolicy | None = None) -> complex:
    """Genus-2 theta with characteristic [a,b;c,d] on the z2 family, evaluated
    through its splitting into genus-1 thetas of moduli 2x and 2y:

        sum over e in {0, 1/2} of
        theta[(a+b)/2 + e; c+d](2x) * theta[(a-b)/2 + e; c-d](2y).

    The e-sum makes the expression symmetric under (x <-> y, a <-> b, c <-> d).
    """
    x, y = complex(x), complex(y)
    if x.imag <= 0 or y.imag <= 0:
        raise DomainViolation("x and y must lie in the upper half-plane")
    Nx, Ny = _auto_N1(2 * x.imag), _auto_N1(2 * y.imag)
    total = 0j
    for e in (0.0, 0.5):
        total += (_theta1_series((a + b) / 2 + e, c + d, 2 * x, Nx)
                  * _theta1_series((a - b) / 2 + e, c - d, 2 * y, Ny))
    return complex(total)


def inverse_binary_addition_check(a: float, c: float, b: float, x: complex,
                                  policy: TruncationPolicy | None = None) -> float:
    """|LHS - RHS| of the inverse binary addition formula

        theta[a;b](2x) theta[c;b](2x)
          = 1/2 sum_{d in {0,1/2}} exp(-4 pi i a d) theta[a+c;b+d](x) theta[a-c;d](x)

    evaluated with genus-1 series on both sides.  (With characteristics
    written as integers the phase is the usual exp(-i pi a d).)
    """
    x = complex(x)
    if x.imag <= 0:
        raise DomainViolation("x must lie in the upper half-plane")
    N2, N1 = _auto_N1(2 * x.imag), _auto_N1(x.imag)
    lhs = _theta1_series(a, b, 2 * x, N2) * _theta1_series(c, b, 2 * x, N2)
    rhs = 0.5 * sum(np.exp(-4j * np.pi * a * d)
                    * _theta1_series(a + c, b + d, x, N1)
                    * _theta1_series(a - c, d, x, N1)
                    for d in (0.0, 0.5))
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------------------
# analytic gradients of the log of the strata functionals
#
# Each functional is exp(holomorphic log-part) times powers of Im, so the
# real gradient is read off from the complex log-derivative:
#   d/dRe log|h| = Re(h'/h),   d/dIm log|h| = -Im(h'/h).


def _theta4_log_deriv(kind: int, tau, N: int):
    """d/dtau log theta_kind^4."""
    p, q = {2: (0.5, 0.0), 3: (0.0, 0.0), 4: (0.0, 0.5)}[kind]
    return 4 * _theta1_tau_deriv(p, q, tau, N) / _theta1_series(p, q, tau, N)


def grad_log_small_f(sigma) -> np.ndarray:
    """Gradient of log small_f in (Re sigma, Im sigma); sigma may be an array."""
    sigma = np.asarray(sigma, dtype=complex)
    L = 2 * _eta_log_deriv(sigma)
    return np.stack([L.real, 0.5 / sigma.imag - L.imag])


def grad_log_f_z2(x, y) -> np.ndarray:
    """Gradient of log f_z2 in (Re x, Im x, Re y, Im y); array-capable."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    Nx = _auto_N1(float(np.min(x.imag)))
    Ny = _auto_N1(float(np.min(y.imag)))
    t3x, t4x = jacobi_theta(3, x, Nx) ** 4, jacobi_theta(4, x, Nx) ** 4
    t3y, t4y = jacobi_theta(3, y, Ny) ** 4, jacobi_theta(4, y, Ny) ** 4
    W = t3x * t4y - t4x * t3y
    Wx = (_theta4_log_deriv(3, x, Nx) * t3x * t4y - _theta4_log_deriv(4, x, Nx) * t4x * t3y)
    Wy = (t3x * t4y * _theta4_log_deriv(4, y, Ny) - t4x * t3y * _theta4_log_deriv(3, y, Ny))
    Lx = 6 * _eta_log_deriv(x) + Wx / W
    Ly = 6 * _eta_log_deriv(y) + Wy / W
    return np.stack([
        Lx.real, 2.5 / x.imag - Lx.imag,
        Ly.real, 2.5 / y.imag - Ly.imag,
    ])


def grad_log_f_d2(x) -> np.ndarray:
    """Gradient of log f_d2 in (Re x, Im x); array-capable."""
    x = np.asarray(x, dtype=complex)
    N = _auto_N1(float(np.min(x.imag)))
    t3, t4 = jacobi_theta(3, x, N) ** 8, jacobi_theta(4, x, N) ** 8
    W = t4 - t3
    Wp = 2 * (_theta4_log_deriv(4, x, N) * t4 - _theta4_log_deriv(3, x, N) * t3)
    L = 12 * _eta_log_deriv(x) + Wp / W
    # Im-powers: 6 * (1/2) from f^6 plus the explicit (Im x)^2
    return np.stack([L.real, 5.0 / x.imag - L.imag])


def grad_log_f_d3(sigma) -> np.ndarray:
    """Gradient of log f_d3 in (Re sigma, Im sigma); array-capable."""
    s = np.asarray(sigma, dtype=complex)
    N1 = _auto_N1(float(np.min(s.imag)))
    N3 = _auto_N1(3 * float(np.min(s.imag)))
    t3, t4 = jacobi_theta(3, s, N1) ** 4, jacobi_theta(4, s, N1) ** 4
    T3, T4 = jacobi_theta(3, 3 * s, N3) ** 4, jacobi_theta(4, 3 * s, N3) ** 4
    W = t4 * T3 - t3 * T4
    Wp = (_theta4_log_deriv(4, s, N1) * t4 * T3 + 3 * t4 * T3 * _theta4_log_deriv(3, 3 * s, N3)
          - _theta4_log_deriv(3, s, N1) * t3 * T4 - 3 * t3 * T4 * _theta4_log_deriv(4, 3 * s, N3))
    L = 6 * _eta_log_deriv(s) + 18 * _eta_log_deriv(3 * s) + Wp / W
    return np.stack([L.real, 5.0 / s.imag - L.imag])


def strata_grad_norm(family: str, uv: np.ndarray) -> np.ndarray:
    """|grad log f_family| on an (n, dim) coordinate array (dim 2 or 4)."""
    uv = np.asarray(uv, dtype=float)
    if family == "z2":
        g = grad_log_f_z2(uv[:, 0] + 1j * uv[:, 1], uv[:, 2] + 1j * uv[:, 3])
    elif family == "d2":
        g = grad_log_f_d2(uv[:, 0] + 1j * uv[:, 1])
    elif family == "d3":
        g = grad_log_f_d3(uv[:, 0] + 1j * uv[:, 1])
    else:
        raise DomainViolation("family must be one of 'z2', 'd2', 'd3'")
    return np.sqrt((g**2).sum(axis=0))
