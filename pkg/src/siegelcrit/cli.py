"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 domain/precondition error,
4 numerical failure.  Reports are deterministic JSON (see reporting); grid
commands also write CSV and render a matplotlib figure next to it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import reporting
from .core import (DomainViolation, MoebiusElement, NumericalFailure,
                   SiegelPoint, SiegelError, TruncationPolicy,
                   make_siegel_point)
from .functional import (big_f, f_d2, f_d3, f_z2, grad_big_f, j_invariant,
                         small_f)
from .modular import (apply_symplectic, gottschling_membership,
                      reduce_to_gottschling)
from .search import (GridSpec, classify, hessian_signature, refine_critical,
                     scan_and_classify, strata_search)
from .stationarity import verify_stationary
from .strata import (burnside_interior_point, burnside_point,
                     d3_extremal_point, d6_point, reference_curve, z5_point)
from .curves_euler import (fourth_point_forced, full_moduli_euler,
                           genus1_euler, match_d3_normal_form,
                           rosenhain_branch_points, strata_euler, is_infinite)

PARSE_ERROR, DOMAIN_ERROR, NUMERIC_ERROR = 2, 3, 4

_CURVES = {
    "burnside": burnside_point,
    "d6": d6_point,
    "z5": z5_point,
    "d3x": d3_extremal_point,
    "b1": burnside_point,
    "b2": d6_point,
    "b3": z5_point,
}


def _policy(args) -> TruncationPolicy:
    trunc = getattr(args, "trunc", "adaptive") or "adaptive"
    tail = getattr(args, "tail_tol", 1e-16) or 1e-16
    if trunc == "adaptive":
        return TruncationPolicy("adaptive", tail_tol=tail)
    return TruncationPolicy("fixed", N=int(trunc), tail_tol=tail)


def _parse_matrix(text: str) -> SiegelPoint:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if Path(parts[0]).is_file() if len(parts) == 1 else False:
        parts = Path(parts[0]).read_text().replace(";", ",").split(",")
        parts = [p for p in parts if p.strip()]
    if len(parts) != 3:
        raise DomainViolation("matrix input needs three entries B11,B12,B22")
    entries = [reporting.parse_complex(p) for p in parts]
    return make_siegel_point(2, entries)


def _resolve_point(args) -> SiegelPoint:
    if getattr(args, "curve", None):
        key = args.curve.lower()
        if key == "klein":
            raise DomainViolation("the genus-3 Klein point is handled by klein-check")
        if key not in _CURVES:
            raise DomainViolation(f"unknown curve {args.curve!r}")
        return _CURVES[key]()
    if getattr(args, "matrix", None):
        return _parse_matrix(args.matrix)
    raise DomainViolation("provide --curve or --matrix")


def _emit(args, command: str, config: dict, results: list) -> None:
    if getattr(args, "out", None):
        path = reporting.write_report(args.out, command, config, results)
        print(f"report written to {path}")


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    policy = _policy(args)
    if args.genus1 or (args.sigma and not (args.d3 or args.z2 or args.d2 or args.j)):
        s = reporting.parse_complex(args.sigma)
        val = small_f(s)
        print(f"f({reporting.fmt_complex(s)}) = {reporting.fmt_float(val)}")
        _emit(args, "eval", {"mode": "genus1", "sigma": reporting.fmt_complex(s)},
              [{"value": reporting.fmt_float(val)}])
        return 0
    if args.j:
        s = reporting.parse_complex(args.sigma)
        val = j_invariant(s)
        print(f"J({reporting.fmt_complex(s)}) = {reporting.fmt_complex(val)}")
        _emit(args, "eval", {"mode": "j", "sigma": reporting.fmt_complex(s)},
              [{"value": reporting.fmt_complex(val)}])
        return 0
    if args.z2:
        x = reporting.parse_complex(args.x)
        y = reporting.parse_complex(args.y)
        val = f_z2(x, y, policy)
        print(f"F_z2 = {reporting.fmt_float(val)}")
        _emit(args, "eval", {"mode": "z2", "x": reporting.fmt_complex(x),
                             "y": reporting.fmt_complex(y)},
              [{"value": reporting.fmt_float(val)}])
        return 0
    if args.d2:
        x = reporting.parse_complex(args.x or args.sigma)
        val = f_d2(x, policy)
        print(f"F_d2 = {reporting.fmt_float(val)}")
        _emit(args, "eval", {"mode": "d2", "x": reporting.fmt_complex(x)},
              [{"value": reporting.fmt_float(val)}])
        return 0
    if args.d3:
        s = reporting.parse_complex(args.sigma or args.x)
        val = f_d3(s, policy)
        print(f"F_d3 = {reporting.fmt_float(val)}")
        _emit(args, "eval", {"mode": "d3", "sigma": reporting.fmt_complex(s)},
              [{"value": reporting.fmt_float(val)}])
        return 0
    B = _resolve_point(args)
    val = big_f(B, policy)
    gnorm = float(np.linalg.norm(grad_big_f(B, policy)))
    verdict = gottschling_membership(B)
    print(f"F = {reporting.fmt_float(val)}")
    print(f"|grad F| = {reporting.fmt_float(gnorm)}")
    print(f"fundamental domain: {'inside' if verdict.inside else 'outside'}"
          + ("" if verdict.inside else f" (violated: {list(verdict.violated)})"))
    _emit(args, "eval", {"mode": "genus2"},
          [{"point": reporting.point_payload(B), "value": reporting.fmt_float(val),
            "grad_norm": reporting.fmt_float(gnorm), "inside": verdict.inside,
            "violated": list(verdict.violated)}])
    return 0


def cmd_scan(args) -> int:
    policy = _policy(args)
    spec = GridSpec(points_per_axis=args.resolution, y_max=args.ymax)
    records = scan_and_classify(spec, policy, workers=args.workers)
    for rec in records:
        print(f"{rec.label:14s} F = {rec.f_value:.6f}  signature = {rec.signature}")
    _emit(args, "scan", {"resolution": args.resolution, "ymax": args.ymax,
                         "workers": args.workers},
          [reporting.record_payload(r) for r in records])
    return 0


def cmd_minimize(args) -> int:
    policy = _policy(args)
    rec = refine_critical(_resolve_point(args), policy)
    print(f"label = {rec.label}")
    print(f"F = {reporting.fmt_float(rec.f_value)}  |grad| = {reporting.fmt_float(rec.grad_norm)}")
    print(f"signature = {rec.signature}")
    _emit(args, "minimize", {}, [reporting.record_payload(rec)])
    return 0


def cmd_hessian(args) -> int:
    policy = _policy(args)
    B = _resolve_point(args)
    eigs, signature = hessian_signature(B, policy, step=args.step)
    print("eigenvalues:", " ".join(reporting.fmt_float(e) for e in eigs))
    print(f"signature = {signature}")
    _emit(args, "hessian", {"step": args.step},
          [{"point": reporting.point_payload(B),
            "eigenvalues": [reporting.fmt_float(e) for e in eigs],
            "signature": list(signature)}])
    return 0


def cmd_verify_stationary(args) -> int:
    ref = reference_curve(args.curve)
    report = verify_stationary(ref.period_matrix, ref.stabilizer)
    spec_str = " ".join(reporting.fmt_complex(s) for s in report.spectrum)
    print(f"curve = {ref.name}")
    print(f"spectrum = {spec_str}")
    print(f"contains_one = {report.contains_one}  "
          f"unitary_defect = {reporting.fmt_float(report.unitary_defect)}")
    print("stationary: " + ("certified" if not report.contains_one else "NOT certified"))
    _emit(args, "verify-stationary", {"curve": ref.name},
          [{"spectrum": [reporting.fmt_complex(s) for s in report.spectrum],
            "contains_one": report.contains_one,
            "unitary_defect": reporting.fmt_float(report.unitary_defect)}])
    return 0 if not report.contains_one else 1


def cmd_reduce(args) -> int:
    policy = _policy(args)
    B = _resolve_point(args)
    reduced, T = reduce_to_gottschling(B)
    print("reduced entries:", ", ".join(reporting.fmt_complex(e) for e in reduced.entries))
    print("transform rows:", json.dumps([list(r) for r in T.rows]))
    print(f"F before = {reporting.fmt_float(big_f(B, policy))}  "
          f"after = {reporting.fmt_float(big_f(reduced, policy))}")
    _emit(args, "reduce", {},
          [{"point": reporting.point_payload(reduced),
            "transform": [list(r) for r in T.rows]}])
    return 0


def cmd_strata_scan(args) -> int:
    policy = _policy(args)
    records = strata_search(args.family, args.resolution, policy, y_max=args.ymax)
    for rec in records:
        coords = " ".join(reporting.fmt_complex(z) for z in rec.strata_coords or ())
        print(f"{rec.label:14s} at {coords}  F = {rec.f_value:.6f}  "
              f"signature = {rec.signature}")
    _emit(args, "strata-scan", {"family": args.family, "resolution": args.resolution,
                                "ymax": args.ymax},
          [reporting.record_payload(r) for r in records])
    return 0


def cmd_mass(args) -> int:
    space = args.space.lower()
    if space == "full":
        value = full_moduli_euler()
    elif space in ("genus1", "g1"):
        value = genus1_euler()
    else:
        value = strata_euler(space)
    print(f"{value.numerator}/{value.denominator}" if value.denominator != 1
          else str(value.numerator))
    if space == "full":
        print(f"fourth critical point forced: {fourth_point_forced()}")
    _emit(args, "mass", {"space": space},
          [{"value": f"{value.numerator}/{value.denominator}",
            "fourth_point_forced": fourth_point_forced() if space == "full" else None}])
    return 0


def cmd_rosenhain(args) -> int:
    policy = _policy(args)
    B = d3_extremal_point() if args.d3x else _resolve_point(args)
    pts = rosenhain_branch_points(B, policy)
    rendered = ["inf" if is_infinite(p) else reporting.fmt_complex(p) for p in pts.points]
    print("branch points:", ", ".join(rendered))
    results = [{"branch_points": rendered}]
    if args.match_d3:
        match = match_d3_normal_form(pts)
        print(f"r = {reporting.fmt_complex(match.r)}  (1/r = {reporting.fmt_complex(match.r_inverse)})")
        print(f"residual = {reporting.fmt_float(match.residual)}  "
              f"imag residual = {reporting.fmt_float(match.imag_residual)}")
        results.append({"r": reporting.fmt_complex(match.r),
                        "r_inverse": reporting.fmt_complex(match.r_inverse),
                        "residual": reporting.fmt_float(match.residual),
                        "imag_residual": reporting.fmt_float(match.imag_residual)})
    _emit(args, "rosenhain", {"match_d3": bool(args.match_d3)}, results)
    return 0


def cmd_klein_check(args) -> int:
    ref = reference_curve("klein")
    report = verify_stationary(ref.period_matrix, ref.stabilizer)
    margin = min(abs(s - 1) for s in report.spectrum)
    print("spectrum =", " ".join(reporting.fmt_complex(s) for s in report.spectrum))
    print(f"distance of spectrum from 1: {reporting.fmt_float(margin)}")
    print("stationary: " + ("certified" if not report.contains_one else "NOT certified"))
    _emit(args, "klein-check", {},
          [{"spectrum": [reporting.fmt_complex(s) for s in report.spectrum],
            "margin": reporting.fmt_float(margin),
            "contains_one": report.contains_one}])
    return 0 if not report.contains_one else 1


def _grid_payload(target: str, resolution: int, policy) -> dict[str, np.ndarray]:
    if target in ("genus1", "genus1-j"):
        re = np.linspace(-0.5, 0.5, resolution)
        im = np.linspace(0.9, 2.2, resolution)
        G = np.meshgrid(re, im, indexing="ij")
        s = (G[0] + 1j * G[1]).ravel()
        s = s[np.abs(s) >= 1 - 1e-12]
        vals = np.array([small_f(z) for z in s])
        cols = {"re_sigma": s.real, "im_sigma": s.imag, "f": vals}
        if target == "genus1-j":
            J = np.array([j_invariant(z) for z in s])
            cols.update({"re_j": J.real, "im_j": J.imag})
        return cols
    if target in ("d2", "d3"):
        n = 2 if target == "d2" else 3
        radius = 1 / np.sqrt(n)
        re = np.linspace(0.0, 1.0, resolution)
        im = np.linspace(0.15, 2.0, resolution)
        G = np.meshgrid(re, im, indexing="ij")
        s = (G[0] + 1j * G[1]).ravel()
        s = s[(np.abs(s) >= radius - 1e-12) & (np.abs(s - 1) >= radius - 1e-12)]
        fn = f_d2 if target == "d2" else f_d3
        vals = np.array([fn(z, policy) for z in s])
        return {"re": s.real, "im": s.imag, "F": vals}
    raise DomainViolation(f"unknown plot target {target!r}")


def cmd_plot_data(args) -> int:
    policy = _policy(args)
    cols = _grid_payload(args.target, args.resolution, policy)
    out = Path(args.out or f"{args.target}_grid.csv")
    config = {"target": args.target, "resolution": args.resolution}
    reporting.write_grid_csv(out, config, cols)
    print(f"grid written to {out}")
    if not args.no_figure:
        names = list(cols)
        fig_path = out.with_suffix(".png")
        if args.target == "genus1-j":
            reporting.render_figure(fig_path, cols, "re_j", "im_j", "f",
                                    title="f over the j-plane")
        else:
            reporting.render_figure(fig_path, cols, names[0], names[1], names[-1],
                                    title=f"{names[-1]} on the {args.target} domain")
        print(f"figure written to {fig_path}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siegelcrit",
        description="Evaluate the genus-2 theta functional, locate and classify "
                    "its critical points, and check the mass formulas.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point=False):
        p.add_argument("--trunc", default="adaptive",
                       help="lattice cutoff N or 'adaptive'")
        p.add_argument("--tail-tol", type=float, default=1e-16, dest="tail_tol")
        p.add_argument("--out", help="write a JSON report here")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if point:
            p.add_argument("--curve", help="reference curve name "
                           "(burnside/b1, d6/b2, z5/b3, d3x)")
            p.add_argument("--matrix", help="B11,B12,B22 complex entries or a file path")

    p = sub.add_parser("eval", help="evaluate a functional")
    common(p, point=True)
    p.add_argument("--genus1", action="store_true")
    p.add_argument("--j", action="store_true", help="evaluate the j-invariant")
    p.add_argument("--z2", action="store_true")
    p.add_argument("--d2", action="store_true")
    p.add_argument("--d3", action="store_true")
    p.add_argument("--sigma")
    p.add_argument("--x")
    p.add_argument("--y")
    for name in ("b1", "b2", "b3", "d3x"):
        p.add_argument(f"--{name}", action="store_true", help=f"use the {name} reference point")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="full-domain critical-point scan")
    common(p)
    p.add_argument("--resolution", type=int, default=40)
    p.add_argument("--ymax", type=float, default=2.0)
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 1))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("minimize", help="refine a critical point from a start")
    common(p, point=True)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("hessian", help="Hessian eigenvalues and signature")
    common(p, point=True)
    p.add_argument("--step", type=float, default=1e-4)
    p.set_defaults(func=cmd_hessian)

    p = sub.add_parser("verify-stationary", help="stabilizer spectrum certificate")
    common(p)
    p.add_argument("--curve", required=True,
                   choices=("burnside", "d6", "z5", "klein"))
    p.set_defaults(func=cmd_verify_stationary)

    p = sub.add_parser("reduce", help="reduce into the fundamental domain")
    common(p, point=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("strata-scan", help="critical points on a symmetric family")
    common(p)
    p.add_argument("--family", required=True, choices=("z2", "d2", "d3"))
    p.add_argument("--resolution", type=int, default=100)
    p.add_argument("--ymax", type=float, default=2.0)
    p.set_defaults(func=cmd_strata_scan)

    p = sub.add_parser("mass", help="orbifold Euler characteristics")
    common(p)
    p.add_argument("--space", required=True,
                   choices=("full", "genus1", "z2", "d2", "d3"))
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("rosenhain", help="branch points from theta quotients")
    common(p, point=True)
    p.add_argument("--d3x", action="store_true",
                   help="use the refined extremal d3 point")
    p.add_argument("--match-d3", action="store_true", dest="match_d3",
                   help="fit the triangular normal form and report r")
    p.set_defaults(func=cmd_rosenhain)

    p = sub.add_parser("klein-check", help="genus-3 Klein curve stationarity")
    common(p)
    p.set_defaults(func=cmd_klein_check)

    p = sub.add_parser("plot-data", help="emit figure grids (CSV + PNG)")
    common(p)
    p.add_argument("--target", required=True,
                   choices=("genus1", "genus1-j", "d2", "d3"))
    p.add_argument("--resolution", type=int, default=80)
    p.add_argument("--no-figure", action="store_true", dest="no_figure")
    p.set_defaults(func=cmd_plot_data)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # eval shortcuts --b1 etc. map onto --curve
    for name in ("b1", "b2", "b3", "d3x"):
        if getattr(args, name, False) and args.command == "eval":
            args.curve = name
    try:
        return args.func(args)
    except DomainViolation as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return DOMAIN_ERROR
    except NumericalFailure as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return NUMERIC_ERROR
    except SiegelError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
