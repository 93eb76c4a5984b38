"""Command-line front end.

Machine-readable output (CSV, summary lines) goes to files or stdout,
human diagnostics to stderr.  Exit codes: 0 ok, 2 parse/input error,
3 multiple roots, 4 divergent integral, 5 resonance, 6 tolerance,
7 perturbation bound violated.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from fractions import Fraction

import numpy as np

from .atoms import compute_atoms, moment
from .bench import BenchConfig, loglog_slope, run_bench
from .charpoly import EulerEquation
from .errors import AtomCauchyError, ParseError
from .integral import DEFAULT_TOL
from .perturbation import DEFAULT_COMPACT, DEFAULT_GRID, epsilon_schedule, run_study
from .solver import MAX_NUMERIC_ORDER, evaluate_solution, residual, residual_numeric, solve_particular
from .terms import evaluate, parse

log = logging.getLogger("atomcauchy")

EXIT_PARSE = 2
_NUMERIC_RESIDUAL_POINTS = 16


def _fmt(v):
    return f"{v:.17g}"


def load_problem(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
        eq = EulerEquation(tuple(data["coefficients"]))
        g = parse(str(data["rhs"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, AtomCauchyError):
            raise
        raise ParseError(f"invalid problem file {path}: {exc}") from None
    except OSError as exc:
        raise ParseError(f"cannot read problem file {path}: {exc}") from None
    return eq, g, data


def _write_csv(path, header, rows):
    fh = open(path, "w", newline="") if path != "-" else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _max_residual(eq, y, g, xs):
    if y.closed_form is not None and eq.is_exact and y.closed_form.is_exact:
        rest = residual(eq, y.closed_form) - g
        if not rest:
            return "0 (exact)"
        return f"{np.max(np.abs(evaluate(rest, xs))):.3e} (closed form)"
    if eq.order > MAX_NUMERIC_ORDER:
        return "n/a (order too high for finite differences)"
    pts = np.linspace(xs.min(), xs.max(), min(len(xs), _NUMERIC_RESIDUAL_POINTS))
    res = max(abs(residual_numeric(eq, y, x)) for x in pts)
    scale = max(np.max(np.abs(evaluate(g, pts))), 1e-300)
    return f"{res / scale:.3e} (finite differences, relative to max|g|)"


def cmd_solve(args):
    eq, g, data = load_problem(args.problem)
    lo, hi = args.range or data.get("x_range", (0.5, 5.0))
    samples = args.samples or int(data.get("samples", 200))
    y = solve_particular(eq, g)
    xs = np.linspace(float(lo), float(hi), samples)
    ys = evaluate_solution(y, xs, args.tol)
    _write_csv(args.out, ["x", "y"], [(_fmt(a), _fmt(b)) for a, b in zip(xs, ys)])
    if y.closed_form is not None:
        print(f"y_p = {y.closed_form}")
    else:
        nq = sum(not c.integral.is_closed_form for c in y.components)
        print(f"y_p = sum of {len(y.components)} atom components ({nq} by quadrature)")
    print(f"max_residual = {_max_residual(eq, y, g, xs)}")
    return 0


def _parse_eps(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ParseError(f"invalid --eps list {text!r}") from None


def cmd_perturb(args):
    eq, g, _ = load_problem(args.problem)
    eps = _parse_eps(args.eps) if args.eps else epsilon_schedule(args.seed)
    compact = tuple(args.range) if args.range else DEFAULT_COMPACT
    study = run_study(
        eq, g, eps, compact=compact, seed=args.seed, grid_points=args.samples or DEFAULT_GRID, tol=args.tol
    )
    curves = study.curves
    header = ["x"] + [f"err_eps{j + 1}" for j in range(len(eps))]
    rows = [[_fmt(x)] + [_fmt(v) for v in col] for x, col in zip(curves.grid, curves.errors.T)]
    _write_csv(args.out, header, rows)
    sup = ",".join(f"{v:.6e}" for v in curves.sup_norms)
    eps_txt = ",".join(f"{e:.6e}" for e in eps)
    if study.bound is None:
        log.warning("bound fit skipped: needs at least three epsilon levels")
        print(f"eps={eps_txt} sup={sup}")
    else:
        b = study.bound
        print(
            f"eps={eps_txt} sup={sup} alpha={b.alpha:g} beta={b.beta:g} "
            f"C_K={b.C_K:.6e} check={str(b.check).lower()}"
        )
    return 0


def cmd_bench(args):
    kwargs = dict(n_min=args.n_min, n_max=args.n_max, trials=args.trials, seed=args.seed)
    if args.range:
        kwargs["root_range"] = tuple(args.range)
    if args.samples:
        kwargs["grid_points"] = args.samples
    try:
        config = BenchConfig(**kwargs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    rows = run_bench(config)
    _write_csv(args.out, ["n", "seconds"], [(n, _fmt(t)) for n, t in rows])
    if rows:
        slope = loglog_slope(rows)
        print(f"slope = {slope:.4f}" if math.isfinite(slope) else "slope = nan")
    return 0


def cmd_atoms(args):
    try:
        nodes = [Fraction(v) if "/" in v or v.lstrip("-").isdigit() else float(v) for v in args.nodes]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid node list {args.nodes!r}") from None
    try:
        weights = compute_atoms(nodes)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    for x, w in zip(nodes, weights):
        print(f"A({x}) = {w}")
    for s in range(len(nodes)):
        print(f"M({s}) = {moment(weights, nodes, s)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="atomcauchy", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--range", type=float, nargs=2, metavar=("A", "B"), default=None)
        p.add_argument("--out", default=out_default, help="output CSV path ('-' for stdout)")

    p = sub.add_parser("solve", help="solve a problem JSON and write an x,y CSV")
    p.add_argument("problem")
    common(p, "solution.csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("perturb", help="root-perturbation error curves")
    p.add_argument("problem")
    p.add_argument("--eps", default=None, help="comma-separated epsilons (default c*10^-j, j=1..5)")
    common(p, "errors.csv")
    p.set_defaults(func=cmd_perturb, tol=1e-13)

    p = sub.add_parser("bench", help="timing against the number of roots")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--trials", type=int, default=3)
    common(p, "bench.csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("atoms", help="print atom weights and moments of a node list")
    p.add_argument("nodes", nargs="+")
    p.set_defaults(func=cmd_atoms)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except AtomCauchyError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
