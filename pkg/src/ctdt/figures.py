"""Numeric data behind the response figures, with CSV and SVG writers.

Each DT figure has a transient table (impulse and step responses over the
first ``n`` samples) and a frequency table over ``[0, fs/2]``. Figure ``f1``
compares two CT pole/zero models on a log grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .blocks import canonical, flatten
from .ct import freq_response, lpf
from .discretize import dt_hpf, dt_lpf_from_pole, negative_pole_filter
from .dt import (
    DifferenceEquation,
    dt_freq_response,
    impulse_response_dt,
    singular_points,
    step_response_dt,
    unit_delay_points,
)
from .errors import BadParameter
from .rational import Domain, PoleZeroGain, Root, cascade, from_pzg

FIGURE_IDS = ("f1", "f3", "f4", "f5", "f6", "f7", "f8", "f9")
DT_POINTS = 512
CT_POINTS_PER_DECADE = 512


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    z_p: float = 0.6
    fs: float = 1.0
    n: int = 16
    tau_nd: float = 1e-4

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise BadParameter(f"unknown figure {self.figure_id!r}; choose from {', '.join(FIGURE_IDS)}")
        if not self.fs > 0 or self.n < 1:
            raise BadParameter("fs must be positive and n at least 1")


@dataclass
class Table:
    name: str
    header: tuple[str, ...]
    columns: list[np.ndarray] = field(default_factory=list)

    def rows(self):
        return zip(*self.columns)


@dataclass
class FigureData:
    spec: FigureSpec
    title: str
    tables: list[Table]


def figure_system(spec: FigureSpec) -> DifferenceEquation:
    """The DT system drawn in a figure (f3..f9)."""
    fid, zp = spec.figure_id, spec.z_p
    arch = {"f3": "fir_differentiator", "f4": "moving_sum", "f5": "accumulator", "f6": "oscillator"}
    if fid in arch:
        return flatten(canonical(arch[fid], 1.0))
    if fid == "f7":
        return dt_lpf_from_pole(zp)
    if fid == "f8":
        return negative_pole_filter(zp)
    if fid == "f9":
        return dt_hpf(zp)
    raise BadParameter(f"{fid} is not a DT figure")


def _titles(spec: FigureSpec) -> str:
    return {
        "f1": "CT pole/zero models with a non-dominant pole",
        "f3": "discrete differentiator",
        "f4": "2-sample moving sum",
        "f5": "discrete accumulator",
        "f6": "discrete oscillator",
        "f7": f"discrete low-pass, z_p = {spec.z_p!r}",
        "f8": f"negative-pole filter, pole at -{spec.z_p!r}",
        "f9": f"discrete high-pass, z_p = {spec.z_p!r}",
    }[spec.figure_id]


def dt_grid(fs: float, points: int = DT_POINTS) -> np.ndarray:
    return np.linspace(0.0, fs / 2, points)


def ct_grid(f_lo: float, f_hi: float, per_decade: int = CT_POINTS_PER_DECADE) -> np.ndarray:
    decades = math.log10(f_hi / f_lo)
    count = int(round(decades * per_decade)) + 1
    return np.logspace(math.log10(f_lo), math.log10(f_hi), count)


def _dt_tables(spec: FigureSpec) -> list[Table]:
    de = figure_system(spec)
    imp = impulse_response_dt(de, spec.n, spec.fs).samples
    stp = step_response_dt(de, spec.n, spec.fs).samples
    transient = Table("transient", ("n", "impulse", "step"),
                      [np.arange(spec.n, dtype=float), imp, stp])
    f = dt_grid(spec.fs)
    tf = de.to_tf()
    # grid points sitting on a unit-circle pole have no finite response
    keep = ~singular_points(tf.den, unit_delay_points(f, spec.fs))
    fr = dt_freq_response(de, spec.fs, f[keep])
    freq = Table("frequency", ("freq_hz", "magnitude_db", "phase_rad"),
                 [f[keep], fr.magnitude_db, fr.phase])
    return [transient, freq]


def physical_models(tau_nd: float = 1e-4):
    """Integrator-like and differentiator-like ``(s - s_z)/(s - s_p)`` sections
    made proper by a non-dominant low-pass pole at ``-1/tau_nd``."""
    w_lo, w_hi = 2 * np.pi * 1.0, 2 * np.pi * 100.0

    def section(zero, pole):
        core = from_pzg(PoleZeroGain((Root(complex(-zero), 1),), (Root(complex(-pole), 1),), 1.0, Domain.CT_S))
        # unit gain at DC
        core = core * from_pzg(PoleZeroGain((), (), pole / zero, Domain.CT_S))
        return cascade([core, lpf(tau_nd)])

    return {"integrator": section(w_hi, w_lo), "differentiator": section(w_lo, w_hi)}


def _ct_tables(spec: FigureSpec) -> list[Table]:
    f = ct_grid(1e-2, 1e5)
    cols, header = [f], ["freq_hz"]
    for name, tf in physical_models(spec.tau_nd).items():
        fr = freq_response(tf, 2 * np.pi * f)
        cols += [fr.magnitude_db, fr.phase]
        header += [f"{name}_db", f"{name}_phase_rad"]
    return [Table("frequency", tuple(header), cols)]


def figure_data(spec: FigureSpec) -> FigureData:
    tables = _ct_tables(spec) if spec.figure_id == "f1" else _dt_tables(spec)
    return FigureData(spec, _titles(spec), tables)


# --------------------------------------------------------------------------
# Writers
# --------------------------------------------------------------------------

def format_csv(table: Table) -> str:
    lines = [",".join(table.header)]
    for row in table.rows():
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_csv(path) -> tuple[list[str], np.ndarray]:
    text = Path(path).read_text()
    lines = text.splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, data


_W, _H, _PAD = 640, 240, 40


def _polyline(x, y, x_range, y_range, top: float, colour: str, log_x: bool) -> str:
    xs = np.log10(x) if log_x else np.asarray(x, dtype=float)
    x0, x1 = (math.log10(v) for v in x_range) if log_x else x_range
    y0, y1 = y_range
    pts, runs = [], []
    for xv, yv in zip(xs, y):
        if not np.isfinite(yv):
            if pts:
                runs.append(pts)
            pts = []
            continue
        px = _PAD + (xv - x0) / ((x1 - x0) or 1.0) * (_W - 2 * _PAD)
        py = top + _H - _PAD - (min(max(yv, y0), y1) - y0) / ((y1 - y0) or 1.0) * (_H - 2 * _PAD)
        pts.append(f"{px:.2f},{py:.2f}")
    if pts:
        runs.append(pts)
    return "".join(
        f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(r)}"/>\n'
        for r in runs)


def _range(arrays) -> tuple[float, float]:
    vals = np.concatenate([np.asarray(a, dtype=float)[np.isfinite(a)] for a in arrays])
    if vals.size == 0:
        return (0.0, 1.0)
    lo, hi = float(vals.min()), float(vals.max())
    if hi - lo < 1e-9:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def render_svg(data: FigureData) -> str:
    """Static SVG 1.1: one panel per table, every numeric column against the first."""
    panels = data.tables
    height = _H * len(panels) + 30
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{height}">\n',
        f'<text x="{_W // 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">'
        f"{data.title}</text>\n",
    ]
    for i, table in enumerate(panels):
        top = 30 + i * _H
        x = table.columns[0]
        log_x = data.spec.figure_id == "f1"
        ys = [c for h, c in zip(table.header[1:], table.columns[1:]) if "phase" not in h]
        names = [h for h in table.header[1:] if "phase" not in h]
        x_range = (float(x[0]), float(x[-1]))
        y_range = _range(ys)
        out.append(f'<rect x="{_PAD}" y="{top + _PAD}" width="{_W - 2 * _PAD}" '
                   f'height="{_H - 2 * _PAD}" fill="none" stroke="#888"/>\n')
        out.append(f'<text x="{_PAD}" y="{top + _PAD - 6}" font-family="sans-serif" font-size="11">'
                   f'{table.name}: {", ".join(names)} vs {table.header[0]} '
                   f'[{y_range[0]:.3g}, {y_range[1]:.3g}]</text>\n')
        for j, y in enumerate(ys):
            out.append(_polyline(x, y, x_range, y_range, top, _COLOURS[j % len(_COLOURS)], log_x))
    out.append("</svg>\n")
    return "".join(out)


def write_figure(spec: FigureSpec, out_dir) -> list[Path]:
    """Write ``<id>_<table>.csv`` files and ``<id>.svg``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = figure_data(spec)
    paths = []
    for table in data.tables:
        p = out_dir / f"{spec.figure_id}_{table.name}.csv"
        p.write_bytes(format_csv(table).encode())
        paths.append(p)
    svg = out_dir / f"{spec.figure_id}.svg"
    svg.write_bytes(render_svg(data).encode())
    paths.append(svg)
    return paths
