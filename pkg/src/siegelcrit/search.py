"""Numerical localization and classification of critical points.

The six-dimensional scan walks a cartesian grid over the Gottschling domain
(half of it: x3 >= 0, the reflection symmetry supplies the rest), keeps the
nodes whose gradient norm sits within 0.01 of the per-y1-slice minimum, and
refines each candidate by Nelder-Mead on |grad F|^2 followed by a Newton
polish on the analytic gradient.  Signatures come from central-difference
Hessians of F itself.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from .core import (DegenerateHessian, DomainViolation, EscapedDomain,
                   NoConvergence, SiegelPoint, TruncationPolicy,
                   make_siegel_point)
from .functional import (batched_grad_norm, big_f, f_d2, f_d3, f_z2,
                         grad_log_f_d2, grad_log_f_d3, grad_log_f_z2,
                         grad_log_small_f, small_f, strata_grad_norm)
from .modular import fundamental_domain_contains, modular_equivalent
from .theta import _theta2_batch

__all__ = [
    "GridSpec", "CriticalPointRecord", "grid_scan", "refine_critical",
    "hessian_signature", "classify", "strata_search", "scan_and_classify",
    "genus1_critical_points",
]

GRAD_TOL = 1e-10
SLICE_MARGIN = 0.01
DEDUP_RADIUS = 1e-2
MIN_F_VALUE = 0.01
_SQ3_HALF = math.sqrt(3) / 2


@dataclass(frozen=True)
class GridSpec:
    """Cartesian grid over (x1, x2, x3, y1, y2, y3).

    Default ranges cover the half fundamental domain with x3 >= 0 and
    y_i <= y_max; explicit ranges override them (seeded boxes).
    """

    points_per_axis: int = 40
    y_max: float = 2.0
    ranges: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise DomainViolation("points_per_axis must be >= 2")
        if self.y_max <= _SQ3_HALF:
            raise DomainViolation("y_max must exceed sqrt(3)/2")
        if self.ranges is not None and len(self.ranges) != 6:
            raise DomainViolation("ranges must list six (lo, hi) pairs")

    def axis_ranges(self) -> tuple[tuple[float, float], ...]:
        if self.ranges is not None:
            return self.ranges
        return ((-0.5, 0.5), (-0.5, 0.5), (0.0, 0.5),
                (_SQ3_HALF, self.y_max), (0.0, self.y_max / 2), (_SQ3_HALF, self.y_max))

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, self.points_per_axis) for lo, hi in self.axis_ranges()]

    @classmethod
    def box(cls, center: SiegelPoint, half_width: float = 0.05,
            points_per_axis: int = 12, y_max: float = 2.0) -> "GridSpec":
        c = center.coords
        rng = tuple((float(v - half_width), float(v + half_width)) for v in c)
        return cls(points_per_axis=points_per_axis, y_max=y_max, ranges=rng)


@dataclass(frozen=True)
class CriticalPointRecord:
    B: SiegelPoint
    f_value: float
    grad_norm: float
    hessian_eigenvalues: tuple[float, ...]
    signature: tuple[int, int]
    label: str = "unknown"
    strata_coords: tuple[complex, ...] | None = None
    degenerate: bool = False

    @property
    def strata_coords_flat(self) -> tuple[float, ...]:
        out: list[float] = []
        for z in self.strata_coords or ():
            out += [z.real, z.imag]
        return tuple(out)


# ---------------------------------------------------------------------------
# vectorized helpers


def _pd_mask(c: np.ndarray) -> np.ndarray:
    return (c[:, 3] > 0) & (c[:, 3] * c[:, 5] - c[:, 4] ** 2 > 0)


def _membership_mask(c: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vectorized Gottschling membership on (n, 6) coordinate rows."""
    x1, x2, x3, y1, y2, y3 = (c[:, i] for i in range(6))
    m = (np.abs(x1) <= 0.5 + tol) & (np.abs(x2) <= 0.5 + tol) & (np.abs(x3) <= 0.5 + tol)
    m &= (y2 >= -tol) & (y1 >= 2 * y2 - tol) & (y3 >= y1 - tol)
    m &= _pd_mask(c)
    B11 = x1 + 1j * y1
    B12 = x2 + 1j * y2
    B22 = x3 + 1j * y3
    m &= (np.abs(B11) >= 1 - tol) & (np.abs(B22) >= 1 - tol)
    s = B11 + B22 - 2 * B12
    m &= (np.abs(s + 1) >= 1 - tol) & (np.abs(s - 1) >= 1 - tol)
    from .modular import _S_SHAPES
    for S in _S_SHAPES:
        det = (B11 + S[0, 0]) * (B22 + S[1, 1]) - (B12 + S[0, 1]) ** 2
        m &= np.abs(det) >= 1 - tol
    return m


def _lambda_min(y1: float, y2: float, y3: float) -> float:
    return 0.5 * ((y1 + y3) - math.hypot(y1 - y3, 2 * y2))


def _pick_N(coords: np.ndarray, policy: TruncationPolicy) -> int:
    """Truncation order for a batch: adaptive from the worst Im eigenvalue."""
    if policy.mode == "fixed":
        return policy.N
    lam = float(np.min(0.5 * ((coords[:, 3] + coords[:, 5])
                              - np.hypot(coords[:, 3] - coords[:, 5], 2 * coords[:, 4]))))
    lam = max(lam, 1e-6)
    target = -math.log(policy.tail_tol / 50.0)
    return int(np.clip(math.ceil(math.sqrt(target / (math.pi * lam)) + 0.5) + 1, 3, 12))


def _grad6(v: np.ndarray, N: int) -> np.ndarray:
    """Gradient of big_f at a single coordinate row, truncation N."""
    flat = (v[:3] + 1j * v[3:])[None, :]
    vals, ders = _theta2_batch(flat, N, want_derivs=True)
    r = (ders[:, :, 0] / vals[:, 0][:, None]).sum(axis=0)
    y1, y2, y3 = v[3], v[4], v[5]
    det = y1 * y3 - y2**2
    F = det**2.5 * np.abs(vals[:, 0]).prod()
    return F * np.array([
        r[0].real, r[1].real, r[2].real,
        2.5 * y3 / det - r[0].imag,
        -5.0 * y2 / det - r[1].imag,
        2.5 * y1 / det - r[2].imag])


def _f_batch(rows: np.ndarray, N: int) -> np.ndarray:
    """big_f on (n, 6) coordinate rows, truncation N."""
    flat = rows[:, :3] + 1j * rows[:, 3:]
    vals, _ = _theta2_batch(flat, N, want_derivs=False)
    det = rows[:, 3] * rows[:, 5] - rows[:, 4] ** 2
    return det**2.5 * np.abs(vals).prod(axis=0)


# ---------------------------------------------------------------------------
# grid scan


def _scan_slice(args) -> list[tuple[float, np.ndarray]]:
    """Candidates for one y1 slice: [(grad_norm, coords), ...]."""
    y1, axes, N, chunk = args
    x1a, x2a, x3a, y2a, y3a = axes
    grids = np.meshgrid(x1a, x2a, x3a, y2a, y3a, indexing="ij")
    rows = np.stack([grids[0].ravel(), grids[1].ravel(), grids[2].ravel(),
                     np.full(grids[0].size, y1), grids[3].ravel(), grids[4].ravel()],
                    axis=1)
    out: list[tuple[float, np.ndarray]] = []
    best = math.inf
    for lo in range(0, rows.shape[0], chunk):
        part = rows[lo: lo + chunk]
        mask = _membership_mask(part)
        if not mask.any():
            continue
        inside = part[mask]
        g = batched_grad_norm(inside, N)
        best = min(best, float(g.min()))
        keep = g <= best + SLICE_MARGIN
        out.extend((float(gv), row.copy()) for gv, row in zip(g[keep], inside[keep]))
    return [(gv, row) for gv, row in out if gv <= best + SLICE_MARGIN]


def _dedupe(cands: list[tuple[float, np.ndarray]], radius: float,
            cap: int | None = None) -> list[np.ndarray]:
    cands = sorted(cands, key=lambda t: t[0])
    kept: list[np.ndarray] = []
    for _, row in cands:
        if all(np.abs(row - k).max() > radius for k in kept):
            kept.append(row)
        if cap is not None and len(kept) >= cap:
            break
    return kept


def grid_scan(spec: GridSpec, policy: TruncationPolicy | None = None,
              workers: int = 1, max_candidates: int | None = 64) -> list[SiegelPoint]:
    """Gradient-norm scan over the grid; returns deduplicated candidate points."""
    policy = policy or TruncationPolicy()
    axes = spec.axes()
    sample = np.array([[0, 0, 0, axes[3][0], 0, axes[5][0]]], dtype=float)
    N = _pick_N(sample, policy)
    tasks = [(float(y1), (axes[0], axes[1], axes[2], axes[4], axes[5]), N, 200_000)
             for y1 in axes[3]]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_slice = list(pool.map(_scan_slice, tasks))
    else:
        per_slice = [_scan_slice(t) for t in tasks]
    cands = [c for slice_cands in per_slice for c in slice_cands]
    kept = _dedupe(cands, DEDUP_RADIUS, cap=max_candidates)
    return [SiegelPoint.from_coords(row) for row in kept]


# ---------------------------------------------------------------------------
# refinement


def refine_critical(start: SiegelPoint, policy: TruncationPolicy | None = None,
                    max_fev: int = 100_000, grad_tol: float = GRAD_TOL,
                    classify_result: bool = True) -> CriticalPointRecord:
    """Minimize |grad F|^2 by Nelder-Mead (reflection 1, expansion 2,
    contraction 1/2, shrink 1/2, initial edge 1e-3, simplex tolerance 1e-12),
    then polish with Newton steps on the analytic gradient."""
    policy = policy or TruncationPolicy()
    if big_f(start, policy) <= 0:
        raise DomainViolation("refinement needs a start with positive functional value")
    v0 = start.coords.astype(float)
    N = _pick_N(v0[None, :], policy)

    def objective(v: np.ndarray) -> float:
        if not _pd_mask(v[None, :])[0]:
            return 1e6
        g = _grad6(v, N)
        return float(g @ g)

    simplex = np.vstack([v0] + [v0 + 1e-3 * np.eye(6)[i] for i in range(6)])
    res = optimize.minimize(objective, v0, method="Nelder-Mead",
                            options={"initial_simplex": simplex, "xatol": 1e-12,
                                     "fatol": np.inf, "maxfev": max_fev})
    v = res.x
    if not _pd_mask(v[None, :])[0]:
        raise EscapedDomain("iterate left the positive-definite cone")
    # Newton polish on grad F = 0 (finite-difference Jacobian of the
    # analytic gradient), pushing well below the simplex noise floor
    h = 1e-6
    for _ in range(12):
        g = _grad6(v, N)
        if np.linalg.norm(g) < 1e-13:
            break
        J = np.empty((6, 6))
        for i in range(6):
            e = np.zeros(6)
            e[i] = h
            J[:, i] = (_grad6(v + e, N) - _grad6(v - e, N)) / (2 * h)
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError:
            break
        if not np.isfinite(step).all() or np.linalg.norm(step) > 0.1:
            break
        v = v - step
        if not _pd_mask(v[None, :])[0]:
            raise EscapedDomain("Newton polish left the positive-definite cone")
    gnorm = float(np.linalg.norm(_grad6(v, N)))
    if gnorm > grad_tol:
        raise NoConvergence(f"gradient norm {gnorm:.3e} above {grad_tol:.1e} "
                            f"after {res.nfev} evaluations")
    B = SiegelPoint.from_coords(v)
    eigs, signature, degenerate = _hessian_eigs(B, policy)
    label = classify(B, policy) if classify_result else "unknown"
    return CriticalPointRecord(B, big_f(B, policy), gnorm, eigs, signature,
                               label, None, degenerate)


def _hessian_eigs(B: SiegelPoint, policy: TruncationPolicy, step: float = 1e-4,
                  ) -> tuple[tuple[float, ...], tuple[int, int], bool]:
    v0 = B.coords.astype(float)
    N = _pick_N(v0[None, :], policy)
    rows = [v0]
    for i in range(6):
        e = np.eye(6)[i] * step
        rows += [v0 + e, v0 - e]
    pairs = [(i, j) for i in range(6) for j in range(i + 1,6)]
    for i, j in pairs:
        ei, ej = np.eye(6)[i] * step, np.eye(6)[j] * step
        rows += [v0 + ei + ej, v0 + ei - ej, v0 - ei + ej, v0 - ei - ej]
    vals = _f_batch(np.array(rows), N)
    f0 = vals[0]
    H = np.zeros((6, 6))
    for i in range(6):
        H[i, i] = (vals[1 + 2 * i] - 2 * f0 + vals[2 + 2 * i]) / step**2
    base = 13
    for k, (i, j) in enumerate(pairs):
        fpp, fpm, fmp, fmm = vals[base + 4 * k: base + 4 * k + 4]
        H[i, j] = H[j, i] = (fpp - fpm - fmp + fmm) / (4 * step**2)
    eigs = np.linalg.eigvalsh((H + H.T) / 2)
    thresh = 1e-6 * np.abs(eigs).max()
    degenerate = bool((np.abs(eigs) < thresh).any())
    n_plus = int((eigs > thresh).sum())
    n_minus = int((eigs < -thresh).sum())
    return tuple(float(e) for e in eigs), (n_plus, n_minus), degenerate


def hessian_signature(B: SiegelPoint, policy: TruncationPolicy | None = None,
                      step: float = 1e-4) -> tuple[tuple[float, ...], tuple[int, int]]:
    """Eigenvalues (sorted) and signature (n_plus, n_minus) of the
    central-difference Hessian of big_f at B."""
    policy = policy or TruncationPolicy()
    v0 = B.coords.astype(float)
    gnorm = float(np.linalg.norm(_grad6(v0, _pick_N(v0[None, :], policy))))
    if gnorm > 1e-8:
        raise DomainViolation(f"Hessian signature needs a critical point; |grad| = {gnorm:.2e}")
    eigs, signature, degenerate = _hessian_eigs(B, policy, step)
    if degenerate:
        raise DegenerateHessian(f"eigenvalue below threshold at step {step:g}")
    return eigs, signature


# ---------------------------------------------------------------------------
# classification


def _reference_points():
    from .strata import (burnside_interior_point, d3_extremal_point, d6_point,
                         z5_boundary_points)
    return (("burnside", burnside_interior_point()),
            ("d6", d6_point()),
            ("z5", z5_boundary_points()[1]),
            ("d3_extremal", d3_extremal_point()))


def classify(record_or_point, policy: TruncationPolicy | None = None) -> str:
    """Match a point against the four known critical classes."""
    B = record_or_point.B if isinstance(record_or_point, CriticalPointRecord) else record_or_point
    policy = policy or TruncationPolicy()
    for label, ref in _reference_points():
        ok, _ = modular_equivalent(B, ref, policy)
        if ok:
            return label
    return "unknown"


# ---------------------------------------------------------------------------
# ful scan pipeline


def scan_and_classify(spec: GridSpec, policy: TruncationPolicy | None = None,
                      workers: int = 1) -> list[CriticalPointRecord]:
    """grid_scan + refinement, merged into modular-equivalence classes."""
    policy = policy or TruncationPolicy()
    records: list[CriticalPointRecord] = []
    for cand in grid_scan(spec, policy, workers=workers):
        try:
            rec = refine_critical(cand, policy)
        except (NoConvergence, EscapedDomain, DomainViolation):
            continue
        if rec.f_value < MIN_F_VALUE:
            continue
        records.append(rec)
    merged: list[CriticalPointRecord] = []
    for rec in sorted(records, key=lambda r: -r.f_value):
        dup = False
        for kept in merged:
            if kept.label != "unknown" and kept.label == rec.label:
                dup = True
                break
            if np.abs(kept.B.coords - rec.B.coords).max() < 1e-6:
                dup = True
                break
            ok, _ = modular_equivalent(kept.B, rec.B, policy)
            if ok:
                dup = True
                break
        if not dup:
            merged.append(rec)
    return merged


# ---------------------------------------------------------------------------
# strata scans


_STRATA_DIM = {"z2": 4, "d2": 2, "d3": 2}


def _strata_value(family: str, uv: np.ndarray) -> float:
    if family == "z2":
        return f_z2(complex(uv[0], uv[1]), complex(uv[2], uv[3]))
    if family == "d2":
        return f_d2(complex(uv[0], uv[1]))
    return f_d3(complex(uv[0], uv[1]))


def _strata_grad(family: str, uv: np.ndarray) -> np.ndarray:
    if family == "z2":
        return grad_log_f_z2(complex(uv[0], uv[1]), complex(uv[2], uv[3]))
    if family == "d2":
        return grad_log_f_d2(complex(uv[0], uv[1]))
    return grad_log_f_d3(complex(uv[0], uv[1]))


def _strata_embed(family: str, uv: np.ndarray) -> SiegelPoint:
    from .modular import embed_d2, embed_d3, embed_z2
    if family == "z2":
        return embed_z2(complex(uv[0], uv[1]), complex(uv[2], uv[3]))
    if family == "d2":
        return embed_d2(complex(uv[0], uv[1]))
    return embed_d3(complex(uv[0], uv[1]))


def _strata_axes(family: str, resolution: int, y_max: float) -> list[np.ndarray]:
    if family == "z2":
        return [np.linspace(-0.5, 0.5, resolution),
                np.linspace(_SQ3_HALF, y_max, resolution),
                np.linspace(-1.0, 1.0, resolution),
                np.linspace(0.1, y_max, resolution)]
    return [np.linspace(0.0, 1.0, resolution), np.linspace(0.25, y_max, resolution)]


def _strata_mask(family: str, rows: np.ndarray) -> np.ndarray:
    if family == "z2":
        x = rows[:, 0] + 1j * rows[:, 1]
        y = rows[:, 2] + 1j * rows[:, 3]
        return ((np.abs(x) >= 1 - 1e-12) & (np.abs(y - 0.5) >= 0.5 - 1e-12)
                & (np.abs(y + 0.5) >= 0.5 - 1e-12))
    r = 1 / math.sqrt(2 if family == "d2" else 3)
    s = rows[:, 0] + 1j * rows[:, 1]
    return (np.abs(s) >= r - 1e-12) & (np.abs(s - 1) >= r - 1e-12)


def _local_minima_candidates(family: str, resolution: int, y_max: float,
                             g_cap: float = 5.0) -> list[tuple[float, np.ndarray]]:
    """Grid local minima of the log-gradient norm over the masked region.

    The field is evaluated slab by slab along the first axis so the z2 case
    stays within memory at high resolution.
    """
    from scipy.ndimage import minimum_filter

    axes = _strata_axes(family, resolution, y_max)
    tail_shape = tuple(len(a) for a in axes[1:])
    slabs: list[np.ndarray] = []
    for v0 in axes[0]:
        grids = np.meshgrid(*axes[1:], indexing="ij")
        rows = np.stack([np.full(grids[0].size, v0)] + [a.ravel() for a in grids], axis=1)
        field = np.full(rows.shape[0], np.inf)
        mask = _strata_mask(family, rows)
        if mask.any():
            with np.errstate(all="ignore"):
                g = strata_grad_norm(family, rows[mask])
            g[~np.isfinite(g)] = np.inf
            field[mask] = g
        slabs.append(field.reshape(tail_shape))
    out: list[tuple[float, np.ndarray]] = []
    n0 = len(axes[0])
    for i in range(n0):
        lo, hi = max(0, i - 1), min(n0, i + 2)
        stack = np.stack(slabs[lo:hi])
        filt = minimum_filter(stack, size=3, mode="nearest")[i - lo]
        cur = slabs[i]
        hit = np.isfinite(cur) & (cur <= filt + 1e-15) & (cur < g_cap)
        for idx in np.argwhere(hit):
            coords = [axes[0][i]] + [axes[d + 1][idx[d]] for d in range(len(tail_shape))]
            out.append((float(cur[tuple(idx)]), np.array(coords)))
    return out


def _strata_hessian(family: str, uv: np.ndarray, step: float = 1e-4
                    ) -> tuple[tuple[float, ...], tuple[int, int], bool]:
    dim = _STRATA_DIM[family]
    H = np.zeros((dim, dim))
    f0 = _strata_value(family, uv)
    for i in range(dim):
        ei = np.eye(dim)[i] * step
        H[i, i] = (_strata_value(family, uv + ei) - 2 * f0
                   + _strata_value(family, uv - ei)) / step**2
        for j in range(i + 1, dim):
            ej = np.eye(dim)[j] * step
            H[i, j] = H[j, i] = (_strata_value(family, uv + ei + ej)
                                 - _strata_value(family, uv + ei - ej)
                                 - _strata_value(family, uv - ei + ej)
                                 + _strata_value(family, uv - ei - ej)) / (4 * step**2)
    eigs = np.linalg.eigvalsh((H + H.T) / 2)
    thresh = 1e-6 * np.abs(eigs).max()
    degenerate = bool((np.abs(eigs) < thresh).any())
    return (tuple(float(e) for e in eigs),
            (int((eigs > thresh).sum()), int((eigs < -thresh).sum())), degenerate)


def _refine_strata(family: str, uv0: np.ndarray, max_fev: int = 100_000
                   ) -> tuple[np.ndarray, float]:
    dim = _STRATA_DIM[family]

    def objective(uv: np.ndarray) -> float:
        if uv[1] <= 0.05 or (family == "z2" and uv[3] <= 0.05):
            return 1e6
        g = _strata_grad(family, uv)
        return float(g @ g)

    simplex = np.vstack([uv0] + [uv0 + 1e-3 * np.eye(dim)[i] for i in range(dim)])
    res = optimize.minimize(objective, uv0, method="Nelder-Mead",
                            options={"initial_simplex": simplex, "xatol": 1e-12,
                                     "fatol": np.inf, "maxfev": max_fev})
    uv = res.x
    h = 1e-7
    for _ in range(12):
        g = _strata_grad(family, uv)
        if np.linalg.norm(g) < 1e-13:
            break
        J = np.empty((dim, dim))
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = h
            J[:, i] = (_strata_grad(family, uv + e) - _strata_grad(family, uv - e)) / (2 * h)
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError:
            break
        if not np.isfinite(step).all() or np.linalg.norm(step) > 0.1:
            break
        uv = uv - step
    return uv, float(np.linalg.norm(_strata_grad(family, uv)))


def _canonicalize_strata(family: str, uv: np.ndarray) -> np.ndarray:
    """Map refined strata coordinates back into the fundamental region."""
    from .modular import genus1_reduce
    if family == "z2":
        x = complex(uv[0], uv[1])
        y = complex(uv[2], uv[3])
        x_red, g1 = genus1_reduce(x, "gamma")
        y_red, _ = genus1_reduce(g1.apply(y), "gamma2")
        return np.array([x_red.real, x_red.imag, y_red.real, y_red.imag])
    group = "gamma0_2plus" if family == "d2" else "gamma0_3plus"
    s_red, _ = genus1_reduce(complex(uv[0], uv[1]), group)
    return np.array([s_red.real, s_red.imag])


def strata_search(family: str, resolution: int = 100,
                  policy: TruncationPolicy | None = None, y_max: float = 2.0,
                  max_candidates: int = 48) -> list[CriticalPointRecord]:
    """Scan a symmetric family's fundamental region and refine its critical set.

    Records carry the strata coordinates, the strata Hessian data, and the
    embedded genus-2 point with its modular classification.
    """
    family = family.lower()
    if family not in _STRATA_DIM:
        raise DomainViolation("family must be one of 'z2', 'd2', 'd3'")
    if resolution < 2:
        raise DomainViolation("resolution must be >= 2")
    policy = policy or TruncationPolicy()
    spacing = 1.0 / max(resolution - 1, 1)
    cands = _dedupe(_local_minima_candidates(family, resolution, y_max),
                    max(DEDUP_RADIUS, 2.0 * spacing), cap=max_candidates)
    records: list[CriticalPointRecord] = []
    for uv0 in cands:
        uv, log_gnorm = _refine_strata(family, np.asarray(uv0, dtype=float))
        value = _strata_value(family, uv)
        if value < MIN_F_VALUE or log_gnorm * value > GRAD_TOL * 10:
            continue
        if any(np.abs(np.asarray(r.strata_coords_flat) - uv).max() < 1e-6 for r in records):
            continue
        eigs, signature, degenerate = _strata_hessian(family, uv)
        B = _strata_embed(family, uv)
        if family == "z2":
            sc = (complex(uv[0], uv[1]), complex(uv[2], uv[3]))
        else:
            sc = (complex(uv[0], uv[1]),)
        records.append(CriticalPointRecord(
            B, value, log_gnorm * value, eigs, signature,
            classify(B, policy), sc, degenerate))
    return sorted(records, key=lambda r: (-r.f_value, r.strata_coords_flat[0]))


# ---------------------------------------------------------------------------
# genus-1 reproduction


def genus1_critical_points(resolution: int = 60, y_max: float = 2.0
                           ) -> list[tuple[complex, float, tuple[int, int]]]:
    """Critical points of small_f on the standard fundamental domain.

    Returns (sigma, value, signature) triples, one per critical point found.
    """
    from scipy.ndimage import minimum_filter

    re = np.linspace(-0.5, 0.5, resolution)
    im = np.linspace(0.8, y_max, resolution)
    G = np.meshgrid(re, im, indexing="ij")
    s = G[0] + 1j * G[1]
    field = np.full(s.shape, np.inf)
    mask = np.abs(s) >= 1 - 1e-12
    with np.errstate(all="ignore"):
        g = grad_log_small_f(s[mask])
    gn = np.sqrt((g**2).sum(axis=0))
    gn[~np.isfinite(gn)] = np.inf
    field[mask] = gn
    hit = np.isfinite(field) & (field <= minimum_filter(field, size=3, mode="nearest") + 1e-15)
    rows = np.stack([G[0][hit], G[1][hit]], axis=1)
    spacing = 1.0 / max(resolution - 1, 1)
    cands = _dedupe(list(zip(field[hit], rows)), max(DEDUP_RADIUS, 2.0 * spacing), cap=16)
    out: list[tuple[complex, float, tuple[int, int]]] = []
    for uv0 in cands:
        uv = np.asarray(uv0, dtype=float)
        h = 1e-7
        for _ in range(40):
            gv = grad_log_small_f(complex(uv[0], uv[1]))
            if np.linalg.norm(gv) < 1e-13:
                break
            J = np.empty((2, 2))
            for i, dv in enumerate((h, h * 1j)):
                z = complex(uv[0], uv[1])
                J[:, i] = (grad_log_small_f(z + dv) - grad_log_small_f(z - dv)) / (2 * h)
            uv = uv - np.linalg.solve(J, gv)
        sig_pt = complex(uv[0], uv[1])
        if sig_pt.imag <= 0:
            continue
        from .modular import genus1_reduce
        sig_pt, _ = genus1_reduce(sig_pt, "gamma")
        # boundary identifications of the fundamental domain: the two vertical
        # edges and the two halves of the unit arc are glued
        if sig_pt.real < -0.5 + 1e-9:
            sig_pt += 1.0
        if abs(abs(sig_pt) - 1) < 1e-9 and sig_pt.real < -1e-9:
            sig_pt = -1 / sig_pt
        if any(abs(sig_pt - p) < 1e-6 for p, _, _ in out):
            continue
        step = 1e-4
        H = np.zeros((2, 2))
        f0 = small_f(sig_pt)
        H[0, 0] = (small_f(sig_pt + step) - 2 * f0 + small_f(sig_pt - step)) / step**2
        H[1, 1] = (small_f(sig_pt + step * 1j) - 2 * f0 + small_f(sig_pt - step * 1j)) / step**2
        H[0, 1] = H[1, 0] = (small_f(sig_pt + step + step * 1j) - small_f(sig_pt + step - step * 1j)
                             - small_f(sig_pt - step + step * 1j)
                             + small_f(sig_pt - step - step * 1j)) / (4 * step**2)
        eigs = np.linalg.eigvalsh(H)
        thresh = 1e-6 * np.abs(eigs).max()
        out.append((sig_pt, f0, (int((eigs > thresh).sum()), int((eigs < -thresh).sum()))))
    return sorted(out, key=lambda t: -t[1])
