"""Acceptance suite: eight end-to-end criteria at their stated tolerances.

Each criterion is timed against its runtime budget.  A PASS/FAIL line per
criterion is printed in the pytest terminal summary, or directly when the
file is run as a script.
"""

import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from atomcauchy import (
    EulerEquation,
    Expression,
    MonomialPolynomial,
    Term,
    build_charpoly,
    compute_atoms,
    evaluate,
    find_roots,
    lagrange_leading_coefficients,
    moment,
    parse,
    residual,
    residual_numeric,
    run_study,
    solve_particular,
)
from atomcauchy.atoms import moment_scale
from atomcauchy.bench import BenchConfig, loglog_slope, run_bench

ORDER8 = ("9", "-9", "9/2", "-3/2", "3309/4", "3345/4", "1007/4", "28", "1")
ORDER5 = ("-3", "3", "-21/2", "19/2", "17/2", "1")
QUARTIC = ("-3", "3", "-9/2", "7/2", "1")

RESULTS = []


def _record(number, name, ok, detail, elapsed, budget):
    ok = ok and elapsed <= budget
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail} ({elapsed:.2f}s / {budget:g}s)")
    return ok


def _separated_nodes(rng, n, sep=0.1):
    nodes = []
    while len(nodes) < n:
        x = rng.uniform(-5, 5)
        if all(abs(x - y) >= sep for y in nodes):
            nodes.append(x)
    return nodes


def criterion_1():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst_low, worst_top, oracle_ok = 0.0, 0.0, True
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        nodes = _separated_nodes(rng, n)
        a = compute_atoms(nodes)
        for s in range(n - 1):
            worst_low = max(worst_low, abs(moment(a, nodes, s)) / moment_scale(a, nodes, s))
        worst_top = max(worst_top, abs(moment(a, nodes, n - 1) - 1))
        if n <= 8:
            exact = [F(x).limit_denominator(1000) for x in nodes]
            oracle_ok &= tuple(compute_atoms(exact)) == tuple(lagrange_leading_coefficients(exact))
    elapsed = time.perf_counter() - start
    ok = worst_low <= 1e-8 and worst_top <= 1e-10 and oracle_ok
    detail = f"max rel |M(s)| = {worst_low:.1e}, max |M(n-1)-1| = {worst_top:.1e}, oracle match = {oracle_ok}"
    return _record(1, "atom axioms", ok, detail, elapsed, 5)


def criterion_2():
    start = time.perf_counter()
    eq = EulerEquation(ORDER8)
    g = parse("x^4*ln(x)")
    y = solve_particular(eq, g)
    elapsed = time.perf_counter() - start
    coeffs = {(t.power, t.log_exp): t.coeff for t in y.closed_form.terms} if y.closed_form else {}
    ok = coeffs == {(4, 1): F(1, 19845), (4, 0): F(-898, 6251175)} and residual(eq, y.closed_form) == g
    return _record(2, "order-8 closed form", ok, f"y_p = {y.closed_form}", elapsed, 1)


def criterion_3():
    rnd = random.Random(3)
    start = time.perf_counter()
    failures = 0
    for _ in range(200):
        n = rnd.randint(1, 6)
        roots = set()
        while len(roots) < n:
            roots.add(F(rnd.randint(-9, 12), rnd.randint(1, 3)))
        eq = EulerEquation.from_roots(sorted(roots))
        low = math.floor(max(roots)) + 2
        js = rnd.sample(range(low, low + 6), rnd.randint(1, 3))
        g = Expression(tuple(Term(F(rnd.randint(-20, 20) or 1, rnd.randint(1, 7)), j) for j in js))
        y = solve_particular(eq, g)
        failures += y.closed_form is None or residual(eq, y.closed_form) != g
    elapsed = time.perf_counter() - start
    return _record(3, "polynomial right-hand sides", failures == 0, f"{failures}/200 inexact residuals", elapsed, 30)


def criterion_4():
    start = time.perf_counter()
    eq = EulerEquation(ORDER5)
    g = parse("x^8*sin(x)")
    y = solve_particular(eq, g)
    rel = [abs(residual_numeric(eq, y, x)) / abs(evaluate(g, x)) for x in (1.0, 2.0, 4.0)]
    elapsed = time.perf_counter() - start
    detail = "relative residuals " + ", ".join(f"{r:.1e}" for r in rel)
    return _record(4, "order-5 residual", max(rel) <= 1e-3, detail, elapsed, 10)


def criterion_5():
    start = time.perf_counter()
    eq = EulerEquation(QUARTIC)
    parts, ok = [], True
    for k, g in enumerate(["x^4*sin(x)", "x^5*sin(x)", "x^6*sin(x) + x^6*cos(x)"], start=1):
        study = run_study(eq, parse(g), seed=0, compact=(1.0, 2.0))
        sup = study.curves.sup_norms
        ratios = sup[1:-1] / sup[2:]
        good = (
            bool(np.all(np.diff(sup) < 0))
            and bool(np.all((ratios >= 5) & (ratios <= 20)))
            and math.isfinite(study.bound.C_K)
        )
        ok &= good
        parts.append(f"g{k}: ratios {np.round(ratios, 2).tolist()}, C_K = {study.bound.C_K:.3g}")
    elapsed = time.perf_counter() - start
    return _record(5, "perturbation stability", ok, "; ".join(parts), elapsed, 60)


def criterion_6():
    rnd = random.Random(6)
    start = time.perf_counter()
    ok = True
    brute = [MonomialPolynomial((1,))]
    for k in range(12):
        brute.append(brute[-1] * MonomialPolynomial((-k, 1)))
    for _ in range(50):
        n = rnd.randint(1, 12)
        coeffs = [F(rnd.randint(-50, 50), rnd.randint(1, 9)) for _ in range(n)] + [F(rnd.randint(1, 9))]
        eq = EulerEquation(tuple(coeffs))
        expected = MonomialPolynomial((0,))
        for i, a in enumerate(coeffs):
            expected = expected + brute[i].scaled(a)
        ok &= build_charpoly(eq) == expected
    elapsed = time.perf_counter() - start
    return _record(6, "falling-factorial basis", ok, "50 random equations up to order 12", elapsed, 1)


def criterion_7():
    start = time.perf_counter()
    got2 = [float(r) for r in find_roots(build_charpoly(EulerEquation(ORDER8))).roots]
    want2 = [-3, -2, -1, -0.5, 0.5, 1, 2, 3]
    got4 = [float(r) for r in find_roots(build_charpoly(EulerEquation(QUARTIC))).roots]
    want4 = [-2, 0.5, 1, 3]
    elapsed = time.perf_counter() - start
    err2 = max(abs(a - b) for a, b in zip(got2, want2)) if len(got2) == 8 else math.inf
    err4 = max(abs(a - b) for a, b in zip(got4, want4)) if len(got4) == 4 else math.inf
    ok = err2 <= 1e-8 and err4 <= 1e-10
    return _record(7, "root recovery", ok, f"max error {err2:.1e} (order 8), {err4:.1e} (quartic)", elapsed, 10)


def criterion_8():
    start = time.perf_counter()
    rows = run_bench(BenchConfig(n_min=2, n_max=50, trials=3, seed=0))
    slope = loglog_slope(rows)
    elapsed = time.perf_counter() - start
    ok = 0.8 <= slope <= 1.6
    return _record(8, "scaling slope", ok, f"log-log slope {slope:.3f} (band [0.8, 1.6])", elapsed, 180)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 9)])
def test_acceptance(criterion):
    assert criterion(), RESULTS[-1]


if __name__ == "__main__":
    for c in CRITERIA:
        c()
        print(RESULTS[-1], flush=True)
