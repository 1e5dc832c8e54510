"""Deterministic report serialization and figure rendering.

JSON reports carry every float as a decimal string with 15 significant
digits, in fixed field order, so identical runs produce byte-identical
files.  CSV grids start with a '#' comment line holding the run
configuration.  Figures are matplotlib renderings of the same grids,
written next to the delimited output.
"""
from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np

from .core import DomainViolation, SiegelPoint, make_siegel_point

__all__ = [
    "SCHEMA_VERSION", "fmt_float", "fmt_complex", "parse_complex",
    "point_payload", "record_payload", "write_report", "read_report",
    "read_point", "write_grid_csv", "render_figure",
]

SCHEMA_VERSION = "1"


def fmt_float(x: float) -> str:
    if isinstance(x, float) and not np.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".15g")


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        return "inf"
    sign = "+" if z.imag >= 0 else "-"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(z.imag))}i"


_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*"
    r"(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?\s*(?P<unit>[ij])?\s*$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' with optional spaces; also bare reals, 'i', '2i', '-i'."""
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainViolation("empty complex literal")
    if s in ("i", "j", "+i", "+j"):
        return 1j
    if s in ("-i", "-j"):
        return -1j
    m = re.match(r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                 r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?(?P<unit>[ij])?$", s)
    if m is None:
        raise DomainViolation(f"cannot parse complex literal {text!r}")
    re_part, im_part, unit = m.group("re"), m.group("im"), m.group("unit")
    if im_part is not None:
        if unit is None:
            raise DomainViolation(f"cannot parse complex literal {text!r}")
        if im_part in ("+", "-"):
            im_part += "1"
        return complex(float(re_part), float(im_part))
    if unit is not None:
        return complex(0.0, float(re_part))
    return complex(float(re_part), 0.0)


def point_payload(B: SiegelPoint) -> dict:
    return {
        "genus": B.genus,
        "entries": [fmt_complex(e) for e in B.entries],
        "coordinates": [fmt_float(c) for c in B.coords],
    }


def record_payload(rec) -> dict:
    out = {
        "point": point_payload(rec.B),
        "f_value": fmt_float(rec.f_value),
        "grad_norm": fmt_float(rec.grad_norm),
        "hessian_eigenvalues": [fmt_float(e) for e in rec.hessian_eigenvalues],
        "signature": list(rec.signature),
        "label": rec.label,
    }
    if rec.strata_coords is not None:
        out["strata_coordinates"] = [fmt_complex(z) for z in rec.strata_coords]
    if rec.degenerate:
        out["degenerate"] = True
    return out


def write_report(path: str | Path, command: str, config: dict, results: list) -> Path:
    payload = {
        "command": command,
        "config": {k: (fmt_float(v) if isinstance(v, float) else v)
                   for k, v in sorted(config.items())},
        "results": results,
        "version": SCHEMA_VERSION,
    }
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def read_point(payload: dict) -> SiegelPoint:
    entries = [parse_complex(e) for e in payload["entries"]]
    return make_siegel_point(int(payload["genus"]), entries)


def write_grid_csv(path: str | Path, config: dict, columns: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    names = list(columns)
    length = len(next(iter(columns.values())))
    with path.open("w", newline="") as fh:
        fh.write("# config: " + json.dumps({k: str(v) for k, v in sorted(config.items())}) + "\n")
        writer = csv.writer(fh)
        writer.writerow(names)
        for i in range(length):
            writer.writerow([fmt_float(columns[name][i]) for name in names])
    return path


def render_figure(path: str | Path, columns: dict[str, np.ndarray],
                  x: str, y: str, z: str, title: str = "") -> Path:
    """Render a value-over-plane figure (tricontour heatmap) to a file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = np.asarray(columns[x], dtype=float)
    ys = np.asarray(columns[y], dtype=float)
    zs = np.asarray(columns[z], dtype=float)
    fig, ax = plt.subplots(figsize=(7, 5))
    if len(xs) >= 4:
        tri = ax.tricontourf(xs, ys, zs, levels=40, cmap="viridis")
        fig.colorbar(tri, ax=ax, label=z)
    else:
        sc = ax.scatter(xs, ys, c=zs, cmap="viridis")
        fig.colorbar(sc, ax=ax, label=z)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
