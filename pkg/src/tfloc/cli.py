"""Command-line front end: parameter sweeps, bound checks and plot-ready reports.

Exit status is 0 on success, 1 on a numeric failure (a bound violated or an
untrusted computation), 2 on an invalid configuration.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance
from . import geometry as geo
from . import spectral1d as sp
from . import tensor_counting as tc
from . import trace_squared as t2
from . import traces as tr
from ._backend import BACKEND


class UsageError(ValueError):
    """Invalid command-line or config-file input."""


class NumericFailure(RuntimeError):
    """A check failed or a computation could not be trusted."""


def _float_list(text) -> list[float]:
    if isinstance(text, list):
        return text
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("list must not be empty")
    return vals


def _int_list(text) -> list[int]:
    vals = _float_list(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_num(r[c]) if not isinstance(r[c], str) else r[c] for c in columns) + "\n")
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=float) + "\n"


def _sweep(fn, items, jobs: int):
    """Map ``fn`` over ``items`` concurrently; results keep the input order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands; each returns (text, failed)


def cmd_spectrum(args):
    def one(p):
        if args.kind == "localization":
            return sp.localization_spectrum(p, n_nodes=args.nodes)
        if args.kind == "ir":
            return sp.ir_singular_values(p, n_nodes=args.nodes)
        return sp.jr_singular_values(p, n_nodes=args.nodes)

    params = args.c if args.kind == "localization" else args.r
    if params is None:
        raise UsageError(f"--{'c' if args.kind == 'localization' else 'r'} is required for kind {args.kind}")
    spectra = _sweep(one, params, args.jobs)
    if args.format == "json":
        return _json([{"descriptor": s.descriptor(), "nodes": s.nodes, "floor": s.floor,
                       "error_bound": s.error_bound, "sum": float(np.sum(s.values)),
                       "values": [float(v) for v in s.values]} for s in spectra]), False
    buf = io.StringIO()
    for s in spectra:
        head = {"descriptor": s.descriptor(), "nodes": s.nodes, "floor": s.floor,
                "error_bound": s.error_bound, "sum": float(np.sum(s.values))}
        buf.write("# " + json.dumps(head, sort_keys=True) + "\n")
    buf.write("param,index,value,trusted\n")
    for p, s in zip(params, spectra):
        for i, (v, t) in enumerate(zip(s.values, s.trusted), start=1):
            buf.write(f"{p!r},{i},{float(v)!r},{int(t)}\n")
    return buf.getvalue(), False


def _cube_spectrum(c: float, d: int, floor: float | None = None):
    base = sp.localization_spectrum(c)
    return base if d == 1 else tc.product_spectrum(base, d, floor)


def cmd_counting(args):
    eps_min = min(args.eps)
    floor = None if args.d == 1 else max(0.5 * eps_min, 1e-13)

    def one(c):
        s = _cube_spectrum(c, args.d, floor)
        rows = []
        for eps in args.eps:
            rep = tc.plunge_counts(s, eps)
            kb = tc.karnik_bound(c, eps) if args.d == 1 else float("nan")
            env = tc.envelope_report(c, eps, args.d, s, args.alpha)
            rows.append({
                "c": c, "d": args.d, "eps": eps, "N_eps": rep.N_eps, "N_half": rep.N_half,
                "N_one_minus_eps": rep.N_one_minus_eps, "Lambda_plus": rep.Lambda_plus,
                "Lambda_minus": rep.Lambda_minus, "Lambda": rep.Lambda, "karnik_bound": kb,
                "pass": "" if args.d != 1 else str(int(rep.Lambda <= kb)),
                "upper_envelope": env["upper_envelope"], "upper_ratio": env["upper_ratio"],
            })
        return rows

    rows = [r for chunk in _sweep(one, args.c, args.jobs) for r in chunk]
    failed = any(r["pass"] == "0" for r in rows)
    if args.format == "json":
        return _json(rows), failed
    return _csv(COUNTING_COLUMNS, rows), failed


COUNTING_COLUMNS = ("c", "d", "eps", "N_eps", "N_half", "N_one_minus_eps", "Lambda_plus", "Lambda_minus",
                    "Lambda", "karnik_bound", "pass", "upper_envelope", "upper_ratio")


def cmd_bounds_check(args):
    rows = []
    for c in args.c:
        s = sp.localization_spectrum(c)
        for eps in args.eps:
            if eps <= s.floor:
                continue
            lam = tc.plunge_counts(s, eps).Lambda
            rows.append({"check": "karnik", "param": f"c={c!r};eps={eps!r}", "lhs": lam,
                         "rhs": tc.karnik_bound(c, eps)})
        for delta in args.delta:
            count, bound = tr.schatten_count_bound(s, delta)
            rows.append({"check": "schatten_count", "param": f"c={c!r};delta={delta!r}", "lhs": count, "rhs": bound})
        for d in (2, 3):
            for a in args.a:
                lo, hi = tc.sandwich_check(s, d, a)
                rows.append({"check": "sandwich", "param": f"c={c!r};d={d};a={a!r}", "lhs": int(lo and hi), "rhs": 1})
    for r in args.r:
        s = sp.jr_singular_values(r)
        for N in range(args.n_max + 1):
            i = 2 * N + 2
            sigma = float(s.values[i]) if i < len(s) else 0.0
            rows.append({"check": "jr_tail", "param": f"r={r!r};N={N}", "lhs": sigma + s.error_bound,
                         "rhs": args.slack * sp.jr_rank2_tail_bound(N)})
    for row in rows:
        if row["check"] == "sandwich":
            row["pass"] = str(int(row["lhs"] == 1))
        else:
            row["pass"] = str(int(row["lhs"] <= row["rhs"]))
    failed = any(r["pass"] == "0" for r in rows)
    if args.format == "json":
        return _json(rows), failed
    return _csv(("check", "param", "lhs", "rhs", "pass"), rows), failed


SPECTRAL_FUNCTIONS = {
    "identity": lambda a: tr.identity(),
    "entropy": lambda a: tr.entropy(),
    "indicator": lambda a: tr.indicator(0.5 if a is None else a),
    "power": lambda a: tr.power(2.0 if a is None else a),
    "log-singular": lambda a: tr.log_singular(1.5 if a is None else a),
}


def cmd_trace(args):
    f = SPECTRAL_FUNCTIONS[args.f](args.a)
    unit = geo.BoxUnion([geo.AxisBox.cube(0.0, 1.0, args.d)])

    def one(c):
        s = _cube_spectrum(c, args.d)
        tv = tr.trace_function(s, f)
        rep = tr.two_term_prediction(f, unit, unit, c, trace=tv.value)
        return {"c": c, "d": args.d, "f": f.name, "trace": tv.value, "tail_bound": tv.tail_bound,
                "leading": rep.leading, "second": rep.second, "residual": rep.residual,
                "trace_class_integral": rep.admissibility[0], "area_law_integral": rep.admissibility[1]}

    rows = _sweep(one, args.c, args.jobs)
    if args.format == "json":
        return _json(rows), False
    return _csv(TRACE_COLUMNS, rows), False


TRACE_COLUMNS = ("c", "d", "f", "trace", "tail_bound", "leading", "second", "residual",
                 "trace_class_integral", "area_law_integral")


def _read_union(path: str) -> geo.BoxUnion:
    try:
        return geo.parse_box_union(Path(path).read_text())
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def cmd_trs2(args):
    if args.A or args.B:
        if not (args.A and args.B):
            raise UsageError("--A and --B must be given together")
        A, B = _read_union(args.A), _read_union(args.B)
        value, err = t2.trs2_box_union(A, B, with_error=True)
        rep = t2.TrS2Report({"A": geo.format_box_union(A), "B": geo.format_box_union(B)}, "w-integral", value, err)
        if args.format == "json":
            return rep.to_json() + "\n", False
        return _csv(("method", "value", "error_bound"), [{"method": "w-integral", "value": value, "error_bound": err}]), False

    methods = ("explicit", "w-integral", "nystrom", "brute") if args.method == "all" else (args.method,)

    def one(c):
        vals = {}
        for m in methods:
            if m == "explicit":
                vals[m] = t2.trs2_interval_explicit(c)
            elif m == "w-integral":
                vals[m] = t2.trs2_box_union(*t2.interval_pair(c))
            elif m == "nystrom":
                vals[m] = math.fsum(sp.localization_spectrum(c).values ** 2)
            elif m == "brute":
                vals[m] = t2.trs2_brute(c)
            elif m == "asymptotic":
                vals[m] = t2.trs2_asymptotic(c, args.N)
                vals["asymptotic_error"] = t2.trs2_asymptotic_error(c, args.N)
        core = [v for k, v in vals.items() if k != "asymptotic_error"]
        gap = max(core) - min(core)
        return {"c": c, "method": args.method, "values": vals, "max_gap": gap}

    rows = _sweep(one, args.c, args.jobs)
    failed = args.method == "all" and any(r["max_gap"] > args.tol for r in rows)
    if args.format == "json":
        return _json(rows if len(rows) > 1 else rows[0]), failed
    cols = sorted({k for r in rows for k in r["values"]})
    flat = [{"c": r["c"], **r["values"], "max_gap": r["max_gap"]} for r in rows]
    return _csv(("c", *cols, "max_gap"), flat), failed


def _region(args) -> geo.Region:
    if args.region == "disk":
        return geo.ball_region(1.0, args.d)
    if args.region == "cube":
        return geo.box_union_sdf(geo.BoxUnion([geo.AxisBox.cube(0.0, 1.0, args.d)]))
    if args.region == "L":
        return geo.box_union_sdf(geo.l_shape())
    if args.boxes is None:
        raise UsageError("--region boxes needs --boxes FILE")
    return geo.box_union_sdf(_read_union(args.boxes))


def cmd_whitney(args):
    w = geo.whitney_decompose(_region(args), args.D)
    if args.format == "json":
        cen = geo.shell_census(w)
        return _json({"dim": w.dim, "cutoff": w.cutoff, "cubes": len(w), "boundary_cells": len(w.boundary_index),
                      "interior_volume": w.interior_volume(),
                      "census": {str(k): v for k, v in cen.counts.items()},
                      "constants": {str(k): v for k, v in cen.constants.items()}}), False
    return w.to_csv(include_boundary=args.include_boundary), False


def cmd_minkowski(args):
    prof = geo.minkowski_profile(_region(args), args.radii, method=args.method, seed=args.seed,
                                 samples=args.samples)
    rows = [{"r": r, "content": m} for r, m in prof]
    if args.format == "json":
        return _json(rows), False
    return _csv(("r", "content"), rows), False


def cmd_verify_all(args):
    try:
        results = acceptance.run_all(args.only, jobs=args.jobs)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    for r in results:
        print(f"{r.key}: {r.seconds:.2f}s", file=sys.stderr)
    failed = not all(r.passed for r in results)
    if args.format == "json":
        return _json([{"key": r.key, "title": r.title, "passed": r.passed, "measured": r.stable_measured()}
                      for r in results]), failed
    rows = [{"criterion": r.key, "title": r.title, "pass": str(int(r.passed)),
             "measured": ";".join(f"{k}={v}" for k, v in r.stable_measured().items())} for r in results]
    buf = io.StringIO()
    buf.write("criterion,title,pass,measured\n")
    for row in rows:
        buf.write(f"{row['criterion']},{row['title']},{row['pass']},\"{row['measured']}\"\n")
    return buf.getvalue(), failed


COMMANDS = {
    "spectrum": cmd_spectrum,
    "counting": cmd_counting,
    "bounds-check": cmd_bounds_check,
    "trace": cmd_trace,
    "trs2": cmd_trs2,
    "whitney": cmd_whitney,
    "minkowski": cmd_minkowski,
    "verify-all": cmd_verify_all,
}


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="write the primary output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfloc",
        allow_abbrev=False,
        description="Spectra of time-frequency localization operators, plunge counts and trace asymptotics.",
    )
    parser.add_argument("--config", help="key=value file supplying defaults for the chosen command")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of [0,c] x [0,1] (or singular values of I_r / J_r)",
                       description="CSV columns: param,index,value,trusted; one '# {json}' header per "
                                   "spectrum carries nodes, floor, error bound and the sum.")
    p.add_argument("--c", type=_float_list, help="space-frequency products (localization)")
    p.add_argument("--r", type=_float_list, help="radii for --kind ir/jr")
    p.add_argument("--kind", choices=("localization", "ir", "jr"), default="localization")
    p.add_argument("--nodes", type=int, help="quadrature nodes (default grows with c)")
    _common(p)

    p = sub.add_parser("counting", help="counting functions and plunge counts on [0,c]^d x [0,1]^d",
                       description="CSV columns: " + ",".join(COUNTING_COLUMNS)
                                   + ". pass compares Lambda with the explicit 1-D bound (empty for d > 1).")
    p.add_argument("--c", type=_float_list, required=True)
    p.add_argument("--eps", type=_float_list, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--alpha", type=float, default=4.0, help="envelope constant (default 4)")
    _common(p)

    p = sub.add_parser("bounds-check", help="plunge, Schatten, sandwich and J_r tail bounds",
                       description="CSV columns: check,param,lhs,rhs,pass. Exit status 1 if any row fails.")
    p.add_argument("--c", type=_float_list, default=[5.0, 10.0, 20.0, 40.0])
    p.add_argument("--eps", type=_float_list, default=[10.0**-k for k in range(1, 9)])
    p.add_argument("--delta", type=_float_list, default=[0.3, 0.1, 0.01])
    p.add_argument("--a", type=_float_list, default=[0.3, 0.5, 0.7])
    p.add_argument("--r", type=_float_list, default=[1.0, 2.0, 5.0, 20.0])
    p.add_argument("--n-max", type=int, default=12, help="largest N for the J_r tail bound")
    p.add_argument("--slack", type=float, default=1.1, help="multiplier on the J_r tail bound (default 1.1)")
    _common(p)

    p = sub.add_parser("trace", help="Tr f(S) with its two-term prediction",
                       description="CSV columns: " + ",".join(TRACE_COLUMNS) + ".")
    p.add_argument("--c", type=_float_list, required=True)
    p.add_argument("--f", choices=tuple(SPECTRAL_FUNCTIONS), default="entropy")
    p.add_argument("--a", type=float, help="indicator threshold, power exponent or log exponent")
    p.add_argument("--d", type=int, default=1)
    _common(p)

    p = sub.add_parser("trs2", help="Tr S^2 by several independent methods",
                       description="JSON/CSV with one value per method and the largest pairwise gap; "
                                   "with --A/--B computes a general box-union pair.")
    p.add_argument("--c", type=_float_list, default=[10.0])
    p.add_argument("--method", choices=("explicit", "w-integral", "nystrom", "brute", "asymptotic", "all"),
                   default="all")
    p.add_argument("--N", type=int, default=3, help="terms of the asymptotic series")
    p.add_argument("--tol", type=float, default=1e-6, help="allowed gap between methods (default 1e-6)")
    p.add_argument("--A", help="box-union file (one 'lo,hi;lo,hi' box per line)")
    p.add_argument("--B", help="box-union file for the frequency side")
    _common(p)

    for name, helptext in (("whitney", "Whitney decomposition as CSV (level,center...,side,certified_dist)"),
                           ("minkowski", "Minkowski content profile (CSV columns r,content)")):
        p = sub.add_parser(name, help=helptext, description=helptext)
        p.add_argument("--region", choices=("disk", "cube", "L", "boxes"), default="disk")
        p.add_argument("--boxes", help="box-union file for --region boxes")
        p.add_argument("--d", type=int, default=2)
        if name == "whitney":
            p.add_argument("--D", type=int, default=8, help="cutoff level")
            p.add_argument("--include-boundary", action="store_true")
        else:
            p.add_argument("--radii", type=_float_list, default=[2.0**-k for k in range(4, 9)])
            p.add_argument("--method", choices=("grid", "montecarlo"), default="grid")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=1 << 20)
        _common(p)

    p = sub.add_parser("verify-all", help="run the acceptance suite and print a pass/fail table",
                       description="CSV columns: criterion,title,pass,measured. Timings go to stderr.")
    p.add_argument("--only", type=lambda s: [k.strip() for k in s.split(",") if k.strip()],
                   help="comma-separated criterion keys (1..14, envelope)")
    _common(p)
    return parser


def read_config(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.lstrip("-").replace("-", "_")] = v
    return out


def _parse(argv) -> argparse.Namespace:
    parser = build_parser()
    pre_cfg = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre_cfg.add_argument("--config")
    pre, rest = pre_cfg.parse_known_args(argv)
    if pre.config:
        cfg = read_config(pre.config)
        command = next((tok for tok in rest if tok in COMMANDS), None)
        if command is not None:
            subparser = parser._subparsers._group_actions[0].choices[command]
            actions = {a.dest: a for a in subparser._actions}
            unknown = set(cfg) - set(actions)
            if unknown:
                raise UsageError(f"unknown config keys for {command}: {sorted(unknown)}")
            for k in cfg:
                actions[k].required = False
            subparser.set_defaults(**cfg)
    return parser.parse_args(argv)


def run(argv=None) -> int:
    try:
        args = _parse(argv)
    except UsageError as exc:
        print(f"tfloc: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        text, failed = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tfloc: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, sp.ResolutionError, tc.UntrustedThresholdError) as exc:
        print(f"tfloc: numeric failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, geo.GeometryError) as exc:
        print(f"tfloc: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if failed:
        print(f"tfloc: numeric failure: {args.command} reported failing checks (backend {BACKEND})", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
