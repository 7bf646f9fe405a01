"""Command-line entry point: metric, contour, scaling, oracle-check.

Exit codes: 0 success, 2 invalid input, 3 failed expected-exponent check,
4 oracle threshold breach.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .metric import COMPONENTS, EvaluationScheme, full_metric, max_eigenvalue
from .oracle import canonical_directions, fd_metric_check
from .scaling import (CriticalCase, Regime, expected_check, fit_all, scaling_dimension_report,
                      sweep_temperature)
from .xy_model import CouplingPoint, ThermalPoint, is_critical

EXIT_INVALID = 2
EXIT_EXPECTED = 3
EXIT_ORACLE = 4

GRID_HEADER = ["lambda", "gamma", "T", "g_bb", "g_bg", "g_bl", "g_gg", "g_gl", "g_ll",
               "nc_gg", "nc_gl", "nc_ll", "max_eig"]
CONTOUR_HEADER = ["lambda", "gamma", "T", "max_eig", "vx", "vy", "vz"]


class InvalidInput(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.12e" % float(x)
    return "" if x is None else str(x)


def _beta(args) -> float:
    if args.beta is not None and args.T is not None:
        raise InvalidInput("give either --beta or --T, not both")
    if args.beta is not None:
        beta = float(args.beta)
    elif args.T is not None:
        if args.T < 0:
            raise InvalidInput("T must be >= 0")
        beta = np.inf if args.T == 0 else 1.0 / args.T
    else:
        raise InvalidInput("one of --beta or --T is required")
    if not beta > 0:
        raise InvalidInput("beta must be > 0")
    return beta


def _scheme(args) -> EvaluationScheme:
    try:
        return EvaluationScheme(N=args.N, rtol=args.rtol, max_depth=args.max_depth)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


def _temperature(beta: float) -> float:
    return 0.0 if np.isinf(beta) else 1.0 / beta


def _grid_row(m, lam, gamma, t, max_eig):
    return [lam, gamma, t] + [m.component(c) for c in COMPONENTS] + [max_eig]


def _write(rows, header, args, payload=None):
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump(payload if payload is not None else [dict(zip(header, r)) for r in rows],
                      out, indent=2, default=_json_default)
            out.write("\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([fmt(x) for x in r])
    finally:
        if out is not sys.stdout:
            out.close()


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o))


def cmd_metric(args) -> int:
    beta = _beta(args)
    p = ThermalPoint(beta, CouplingPoint(args.lam, args.gamma))
    m = full_metric(p, _scheme(args))
    value, vec = max_eigenvalue(m)
    t = _temperature(beta)
    if args.format == "csv":
        _write([_grid_row(m, args.lam, args.gamma, t, value)], GRID_HEADER, args)
        return 0
    record = {
        "lambda": args.lam, "gamma": args.gamma, "beta": beta if np.isfinite(beta) else "inf",
        "T": t, "scheme": m.scheme.kind, "normalization": m.normalization.value,
        "classical_is_zero_temperature_limit": m.classical_is_limit,
        "components": m.as_dict(), "matrix": m.matrix, "coordinates": ["beta", "gamma", "lambda"],
        "max_eig": value, "direction": vec, "converged": m.converged,
    }
    _write(None, None, args, payload=record)
    return 0


def _axis(spec, name):
    lo, hi, n = float(spec[0]), float(spec[1]), int(float(spec[2]))
    if n < 1:
        raise InvalidInput(f"{name} count must be >= 1")
    if n > 1 and not lo < hi:
        raise InvalidInput(f"{name} range must be nonempty")
    return np.linspace(lo, hi, n) if n > 1 else np.array([lo])


def _contour_cell(task):
    lam, gamma, beta, scheme = task
    try:
        m = full_metric(ThermalPoint(beta, CouplingPoint(lam, gamma)), scheme)
        value, vec = max_eigenvalue(m)
        return m, value, vec, None
    except (ValueError, ArithmeticError) as exc:
        return None, np.nan, np.full(3, np.nan), str(exc)


def contour_grid(lams, gammas, beta, scheme, jobs=1):
    """Evaluate every (lambda, gamma) cell, lambda outer and gamma inner."""
    tasks = [(float(l), float(g), beta, scheme) for l in lams for g in gammas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_contour_cell, tasks, chunksize=64))
    return [_contour_cell(t) for t in tasks]


def cmd_contour(args) -> int:
    beta = _beta(args)
    lams = _axis(args.lambda_range, "lambda")
    gammas = _axis(args.gamma_range, "gamma")
    cap = None if str(args.cap).lower() == "none" else float(args.cap)
    scheme = _scheme(args)
    results = contour_grid(lams, gammas, beta, scheme, args.jobs)
    t = _temperature(beta)
    rows, failures = [], 0
    cells = [(l, g) for l in lams for g in gammas]
    for (lam, gamma), (m, value, vec, err) in zip(cells, results):
        if err is not None:
            failures += 1
        shown = min(value, cap) if cap is not None and np.isfinite(value) else value
        if args.components:
            if m is None:
                rows.append([lam, gamma, t] + [np.nan] * 9 + [shown])
            else:
                rows.append(_grid_row(m, lam, gamma, t, shown))
        else:
            rows.append([lam, gamma, t, shown, *vec])
    _write(rows, GRID_HEADER if args.components else CONTOUR_HEADER, args)
    if failures:
        print(f"warning: {failures} grid points failed and were written as NaN", file=sys.stderr)
    return 0


def cmd_scaling(args) -> int:
    c = CouplingPoint(args.lam, args.gamma)
    if args.critical and not is_critical(c):
        raise InvalidInput(f"--critical given but {c} is gapped")
    sr = sweep_temperature(c, args.t_min, args.t_max, args.points, _scheme(args))
    if sr.regime is Regime.CROSSOVER:
        raise InvalidInput("temperature window is not deep enough for the quasi-classical fit "
                           "(need beta * gap >= 20 everywhere)")
    fits = fit_all(sr, args.component or None)
    header = ["lambda", "gamma", "component", "model", "alpha", "stderr", "r_squared",
              "t_min", "t_max", "reliable"]
    if args.expected:
        header += ["expected", "pass"]
    rows, failed = [], False
    for f in fits:
        row = [args.lam, args.gamma, f.component, f.model.value, f.alpha_hat, f.alpha_stderr,
               f.r_squared, f.window[0], f.window[1], f.reliable]
        if args.expected:
            label, ok = expected_check(f, c)
            failed |= not ok
            row += [label, ok]
        rows.append(row)
    payload = None
    if args.format == "json":
        payload = {"regime": sr.regime.value, "gap": sr.gap,
                   "fits": [dict(zip(header, r)) for r in rows]}
        for f in fits:
            payload["fits"][fits.index(f)].update(constant=f.constant,
                                                  subleading_slope=f.subleading_slope)
        if sr.regime is Regime.QUANTUM_CRITICAL:
            payload["scaling_dimension_report"] = scaling_dimension_report(fits, CriticalCase.of(c))
    _write(rows, header, args, payload=payload)
    return EXIT_EXPECTED if failed else 0


def cmd_oracle_check(args) -> int:
    points = [tuple(map(float, p)) for p in (args.point or [(2.0, 0.8, 0.3)])]
    if args.direction:
        dirs = []
        for d in args.direction:
            v = np.asarray(d, dtype=float)
            if not np.linalg.norm(v) > 0:
                raise InvalidInput("direction must be nonzero")
            dirs.append(v / np.linalg.norm(v))
    else:
        dirs = canonical_directions()
    rows, breach = [], False
    for beta, gamma, lam in points:
        p = ThermalPoint.from_values(beta, gamma, lam)
        if not (np.isfinite(beta) and beta > 0):
            raise InvalidInput("oracle check needs finite beta > 0")
        for v in dirs:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                r = fd_metric_check(p, v, args.step, args.N)
            ok = r.rel_err < args.threshold
            breach |= not ok
            rows.append([beta, gamma, lam, *v, r.analytic, r.oracle, r.rel_err,
                         r.step_warning, ok])
    header = ["beta", "gamma", "lambda", "v_beta", "v_gamma", "v_lambda", "analytic", "oracle",
              "rel_err", "step_warning", "pass"]
    _write(rows, header, args)
    return EXIT_ORACLE if breach else 0


def _common(p, fmt_default="csv"):
    p.add_argument("--N", type=int, default=None, help="odd chain length; default thermodynamic limit")
    p.add_argument("--rtol", type=float, default=1e-9, help="quadrature relative tolerance")
    p.add_argument("--max-depth", type=int, default=40, help="quadrature bisection depth cap")
    p.add_argument("--format", choices=["csv", "json"], default=fmt_default)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _temperature_args(p, default_T=None):
    p.add_argument("--beta", type=float, default=None, help="inverse temperature (inf allowed)")
    p.add_argument("--T", type=float, default=default_T, help="temperature")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="qcbxy", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="JSON file whose keys mirror the flags")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("metric", help="metric tensor at one point")
    _temperature_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    _common(p, "json")
    p.set_defaults(func=cmd_metric)
    subs["metric"] = p

    p = sub.add_parser("contour", help="max-eigenvalue field on a (lambda, gamma) grid")
    _temperature_args(p, default_T=None)
    p.add_argument("--lambda-range", nargs=3, default=[-1.5, 1.5, 121],
                   metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--gamma-range", nargs=3, default=[-1.0, 1.0, 81],
                   metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--cap", default="3", help="clip max_eig for plotting, or 'none'")
    p.add_argument("--components", action="store_true",
                   help="write every metric component instead of the eigenvector")
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_contour)
    subs["contour"] = p

    p = sub.add_parser("scaling", help="fit temperature exponents at one coupling")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--critical", action="store_true", help="require a gapless coupling")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--points", type=int, default=16)
    p.add_argument("--component", action="append", choices=list(COMPONENTS))
    p.add_argument("--expected", action="store_true",
                   help="annotate rows with the tabulated exponent; exit 3 on mismatch")
    _common(p)
    p.set_defaults(func=cmd_scaling)
    subs["scaling"] = p

    p = sub.add_parser("oracle-check", help="compare the metric with exact density matrices")
    p.add_argument("--point", nargs=3, action="append", metavar=("BETA", "GAMMA", "LAMBDA"))
    p.add_argument("--direction", nargs=3, action="append", metavar=("VB", "VG", "VL"))
    p.add_argument("--N", type=int, default=11)
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--threshold", type=float, default=1e-4)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle_check)
    subs["oracle-check"] = p
    return parser, subs


def _apply_config(parser, subs, argv):
    """Install JSON config values as subcommand defaults; flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config) as fh:
        cfg = json.load(fh)
    command = next((a for a in argv if a in subs), cfg.pop("command", None))
    if command not in subs:
        raise InvalidInput("config needs a subcommand")
    sub = subs[command]
    rename = {"lambda": "lam"}
    values = {rename.get(k, k.replace("-", "_")): v for k, v in cfg.items()}
    for action in sub._actions:
        if action.dest in values:
            action.required = False
    sub.set_defaults(**values)
    if command not in argv:
        argv.append(command)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subs = build_parser()
    try:
        _apply_config(parser, subs, argv)
    except (OSError, json.JSONDecodeError, InvalidInput) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    args = parser.parse_args(argv)
    if args.command == "contour" and args.beta is None and args.T is None:
        args.T = 1e-2
    try:
        return args.func(args)
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
