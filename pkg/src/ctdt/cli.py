"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 numeric or domain error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .blocks import Arch, canonical, flatten, parse_netlist, simulate_graph
from .ct import freq_response, hpf, lpf
from .discretize import discretize, dt_hpf, dt_lpf_from_pole, negative_pole_filter
from .dt import DifferenceEquation, Sequence, dt_freq_response
from .errors import LTIError, NetlistError
from .figures import FIGURE_IDS, FigureSpec, Table, format_csv, write_figure
from .rational import RationalTF, to_pzg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive linear grid) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("grid must look like start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"cannot parse grid {text!r}") from None
        if count < 1:
            raise UsageError("grid is empty")
        return np.linspace(start, stop, count)
    vals = _floats(text)
    if not vals:
        raise UsageError("grid is empty")
    return np.array(vals)


def _positive(name: str, value: float | None) -> float:
    if value is None:
        raise UsageError(f"--{name} is required")
    if not value > 0:
        raise UsageError(f"--{name} must be positive, got {value}")
    return value


def _dt_system(kind: str, zp: float | None, zz: float | None) -> DifferenceEquation:
    archs = {a.value: a for a in Arch}
    if kind in archs:
        param = zz if archs[kind] in (Arch.FIR_DIFFERENTIATOR, Arch.MOVING_SUM) else zp
        return flatten(canonical(kind, 1.0 if param is None else param))
    zp = 0.6 if zp is None else zp
    return {"lpf": dt_lpf_from_pole, "hpf": dt_hpf, "negpole": negative_pole_filter}[kind](zp)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode())
    else:
        sys.stdout.write(text)


def cmd_response(args) -> int:
    grid = parse_grid(args.f)
    if args.ct:
        tau = _positive("tau", args.tau)
        tf = lpf(tau) if args.ct == "lpf" else hpf(tau)
        fr = freq_response(tf, 2 * np.pi * grid)
    else:
        fs = _positive("fs", args.fs)
        fr = dt_freq_response(_dt_system(args.dt, args.zp, args.zz), fs, grid)
    if fr.warning:
        print(f"warning: {fr.warning}", file=sys.stderr)
    table = Table("response", ("freq_hz", "magnitude_db", "phase_rad"),
                  [grid, fr.magnitude_db, fr.phase])
    _emit(format_csv(table), args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    spec = FigureSpec(args.figure_id, z_p=args.zp, fs=_positive("fs", args.fs), n=args.n)
    for p in write_figure(spec, args.out):
        print(p)
    return EXIT_OK


def _ct_spec(args) -> RationalTF:
    if args.system == "custom":
        if args.num is None or args.den is None:
            raise UsageError("custom systems need --num and --den (ascending powers of s)")
        return RationalTF(_floats(args.num), _floats(args.den))
    tau = _positive("tau", args.tau)
    return lpf(tau) if args.system == "lpf" else hpf(tau)


def _fmt_roots(roots) -> list[str]:
    return [f"  {complex(r).real:.10g}{complex(r).imag:+.10g}j  |z|={abs(r):.10g}  x{m}"
            for r, m in roots]


def cmd_discretize(args) -> int:
    ts = _positive("ts", args.ts)
    tf = _ct_spec(args)
    dt_tf = discretize(tf, ts, args.method)
    de = DifferenceEquation.from_tf(dt_tf)
    pzg = to_pzg(de.to_tf())
    lines = [
        f"method: {args.method}  Ts: {ts!r}",
        "b: " + " ".join(repr(float(v)) for v in de.b),
        "a: " + " ".join(repr(float(v)) for v in de.a),
        f"gain: {pzg.gain!r}",
        "zeros:", *_fmt_roots(pzg.zeros),
        "poles:", *_fmt_roots(pzg.poles),
    ]
    print("\n".join(lines))
    if args.csv:
        n = max(len(de.b), len(de.a))
        pad = lambda c: [float(c[i]) if i < len(c) else 0.0 for i in range(n)]
        table = Table("coefficients", ("k", "b", "a"),
                      [np.arange(n, dtype=float), np.array(pad(de.b)), np.array(pad(de.a))])
        Path(args.csv).write_bytes(format_csv(table).encode())
    return EXIT_OK


def _read_netlist(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read netlist: {exc}") from None
    return parse_netlist(text)


def cmd_simulate(args) -> int:
    g = _read_netlist(args.netlist)
    fs = _positive("fs", args.fs)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.input == "impulse":
        x = Sequence.impulse(args.n, fs)
    elif args.input == "step":
        x = Sequence.step(args.n, fs)
    else:
        x = Sequence(np.array(_floats(args.input)), fs)
    y = simulate_graph(g, x, args.n)
    table = Table("simulation", ("n", "output"), [np.arange(args.n, dtype=float), y.samples])
    _emit(format_csv(table), args.out)
    return EXIT_OK


def cmd_flatten(args) -> int:
    de = flatten(_read_netlist(args.netlist))
    print("b: " + " ".join(repr(float(v)) for v in de.b))
    print("a: " + " ".join(repr(float(v)) for v in de.a))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ctdt", description="First-order CT/DT filter design and simulation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("response", help="frequency response as CSV")
    sys_group = r.add_mutually_exclusive_group(required=True)
    sys_group.add_argument("--ct", choices=["lpf", "hpf"])
    sys_group.add_argument("--dt", choices=[a.value for a in Arch] + ["lpf", "hpf", "negpole"])
    r.add_argument("--tau", type=float)
    r.add_argument("--fs", type=float, default=1.0)
    r.add_argument("--zp", type=float, help="pole parameter (default 1 for architectures, 0.6 for filters)")
    r.add_argument("--zz", type=float, help="zero parameter of FIR architectures (default 1)")
    r.add_argument("--f", required=True, help="start:stop:count or a comma-separated list, in Hz")
    r.add_argument("--out", help="write CSV here instead of stdout")
    r.set_defaults(func=cmd_response)

    fg = sub.add_parser("figure", help="CSV + SVG data for a figure")
    fg.add_argument("figure_id", choices=FIGURE_IDS)
    fg.add_argument("--out", default=".", help="output directory")
    fg.add_argument("--zp", type=float, default=0.6)
    fg.add_argument("--fs", type=float, default=1.0)
    fg.add_argument("--n", type=int, default=16)
    fg.set_defaults(func=cmd_figure)

    d = sub.add_parser("discretize", help="map a CT system to a difference equation")
    d.add_argument("system", choices=["lpf", "hpf", "custom"])
    d.add_argument("--tau", type=float)
    d.add_argument("--ts", type=float, required=True)
    d.add_argument("--method", choices=["euler", "matched", "tustin"], default="euler")
    d.add_argument("--num", help="numerator coefficients, ascending powers of s")
    d.add_argument("--den", help="denominator coefficients, ascending powers of s")
    d.add_argument("--csv", help="also write the coefficients to this CSV file")
    d.set_defaults(func=cmd_discretize)

    s = sub.add_parser("simulate", help="run a netlist graph")
    s.add_argument("--netlist", required=True)
    s.add_argument("--input", default="impulse", help="impulse, step, or a list of samples")
    s.add_argument("--n", type=int, default=16)
    s.add_argument("--fs", type=float, default=1.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    fl = sub.add_parser("flatten", help="print the difference equation of a netlist graph")
    fl.add_argument("--netlist", required=True)
    fl.set_defaults(func=cmd_flatten)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, NetlistError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LTIError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
