"""Stabilizer-spectrum stationarity certificates.

A period matrix fixed by a symplectic transform is carried to the origin of
the generalized unit ball by a Cayley-type map; the transported transform
acts there as w -> U w U^t with U unitary.  If the linearization of that
action on symmetric matrices has no eigenvalue 1, the gradient of every
modular-invariant smooth function must vanish at the point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (DimensionMismatch, NotAStabilizer, NotUnitary, SiegelPoint,
                   SqrtFailure, SymplecticTransform)
from .modular import apply_symplectic

__all__ = [
    "BallAutomorphism", "StationarityReport", "cayley_to_ball",
    "transport_stabilizer", "linearize_symmetric_action", "verify_stationary",
]

ONE_IN_SPECTRUM_TOL = 1e-8


@dataclass(frozen=True)
class BallAutomorphism:
    """Automorphism blocks (A, B, C, D) of the generalized unit ball with
    C = conj(B), D = conj(A), conj(A)A^t - conj(B)B^t = I, AB^t = BA^t,
    composed here with the plain Cayley map so that the reference Siegel
    point goes to the ball origin."""

    genus: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def constraint_defect(self) -> float:
        I = np.eye(self.genus)
        return float(max(
            np.abs(self.C - np.conj(self.B)).max(),
            np.abs(self.D - np.conj(self.A)).max(),
            np.abs(np.conj(self.A) @ self.A.T - np.conj(self.B) @ self.B.T - I).max(),
            np.abs(self.A @ self.B.T - self.B @ self.A.T).max()))

    def siegel_matrix(self) -> np.ndarray:
        """2g x 2g matrix of the composite map half-space -> ball."""
        g = self.genus
        I = np.eye(g)
        Mphi = np.block([[self.A, self.B], [self.C, self.D]])
        Mcay = np.block([[I, -1j * I], [I, 1j * I]])
        return Mphi @ Mcay

    def map_from_siegel(self, z: np.ndarray) -> np.ndarray:
        M = self.siegel_matrix()
        g = self.genus
        A1, B1, C1, D1 = M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:]
        return (A1 @ z + B1) @ np.linalg.inv(C1 @ z + D1)


@dataclass(frozen=True)
class StationarityReport:
    spectrum: tuple[complex, ...]
    contains_one: bool
    unitary_defect: float


def _hermitian_sqrt(H: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(H)
    if w.min() <= 0:
        raise SqrtFailure(f"I - S conj(S) has a nonpositive eigenvalue {w.min():.3e}")
    return (V * np.sqrt(w)) @ np.conj(V.T)


def cayley_to_ball(z0: SiegelPoint) -> BallAutomorphism:
    """Build the map sending z0 to the ball origin.

    S = (z0 - iI)(z0 + iI)^(-1) is symmetric, so I - S conj(S) is Hermitian
    positive definite; R is its (Hermitian) principal square root and the
    automorphism blocks are A = R^(-1), B = -A S, C = conj(B), D = conj(A).
    """
    if z0.genus not in (2, 3):
        raise DimensionMismatch("supported genus: 2 and 3")
    g = z0.genus
    I = np.eye(g)
    z = z0.matrix
    S = (z - 1j * I) @ np.linalg.inv(z + 1j * I)
    H = I - S @ np.conj(S)
    R = _hermitian_sqrt(H)
    if np.abs(R @ R - H).max() > 1e-10:
        raise SqrtFailure("square-root residual above 1e-10")
    A = np.linalg.inv(R)
    B = -A @ S
    aut = BallAutomorphism(g, A, B, np.conj(B), np.conj(A))
    if np.abs(aut.map_from_siegel(z)).max() > 1e-11:
        raise SqrtFailure("constructed map does not send the point to the origin")
    return aut


def transport_stabilizer(T: SymplecticTransform, z0: SiegelPoint) -> tuple[np.ndarray, float]:
    """Conjugate a stabilizer of z0 to the ball origin; returns (U, defect).

    The transported matrix K T K^(-1) is block diagonal up to a scalar, with
    action w -> U w U^t; U is recovered from the diagonal blocks P, S via
    P S^t = c^2 I, U = P / c (the sign of c is immaterial: the symmetric
    action is quadratic in U).
    """
    moved = apply_symplectic(T, z0)
    if np.abs(moved.matrix - z0.matrix).max() > 1e-9:
        raise NotAStabilizer("transform does not fix the point")
    K = cayley_to_ball(z0).siegel_matrix()
    M = K @ T.matrix.astype(complex) @ np.linalg.inv(K)
    g = z0.genus
    P, Q, R, Sb = M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:]
    if max(np.abs(Q).max(), np.abs(R).max()) > 1e-9:
        raise NotAStabilizer("transported map does not fix the ball origin")
    c2 = P @ Sb.T
    c = np.sqrt(c2[0, 0])
    U = P / c
    defect = float(np.abs(U @ np.conj(U.T) - np.eye(g)).max())
    if defect > 1e-8:
        raise NotUnitary(f"unitary defect {defect:.3e}")
    return U, defect


def linearize_symmetric_action(U: np.ndarray) -> np.ndarray:
    """Matrix of w -> U w U^t on symmetric matrices.

    Genus 2 uses the closed 3x3 form in the basis (w11, w22, w12); genus 3
    the 6x6 linearization on (w11, w22, w33, w12, w13, w23), off-diagonal
    coordinates carrying the same factor-2 pattern.
    """
    U = np.asarray(U, dtype=complex)
    g = U.shape[0]
    if g == 2:
        (u, v), (w, t) = U
        return np.array([
            [u * u, v * v, 2 * u * v],
            [w * w, t * t, 2 * t * w],
            [u * w, v * t, v * w + u * t]])
    if g != 3:
        raise DimensionMismatch("supported genus: 2 and 3")
    idx = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    A = np.zeros((6, 6), dtype=complex)
    for col, (i, j) in enumerate(idx):
        E = np.zeros((g, g))
        E[i, j] = E[j, i] = 1
        W = U @ E @ U.T
        for row, (a, b) in enumerate(idx):
            A[row, col] = W[a, b]
    return A


def verify_stationary(B: SiegelPoint, T: SymplecticTransform) -> StationarityReport:
    """Full chain: transport the stabilizer, linearize, inspect the spectrum.

    Stationarity is certified exactly when 1 is absent from the spectrum.
    """
    U, defect = transport_stabilizer(T, B)
    spec = np.linalg.eigvals(linearize_symmetric_action(U))
    order = np.argsort(np.angle(spec))
    spec = spec[order]
    contains_one = bool(np.min(np.abs(spec - 1)) < ONE_IN_SPECTRUM_TOL)
    return StationarityReport(tuple(complex(s) for s in spec), contains_one, defect)
