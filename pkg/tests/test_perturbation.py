import math

import numpy as np
import pytest

from atomcauchy import (
    BoundViolation,
    EulerEquation,
    PerturbationStudy,
    error_curve,
    evaluate_solution,
    fit_bound,
    parse,
    perturbed_solution,
    run_study,
    solve_particular,
)
from atomcauchy.perturbation import epsilon_schedule, gap_beta

from conftest import QUARTIC

TOY = EulerEquation((-1, 1, 1))
TESTS = ["x^4*sin(x)", "x^5*sin(x)", "x^6*sin(x) + x^6*cos(x)"]


def toy_exact(x, eps):
    # roots +-1 with weights +-1/2, g = x^2
    return x**2 * (0.5 / (1 - eps) - 0.5 / (3 - eps))


def test_schedule_deterministic():
    a = epsilon_schedule(7)
    assert a == epsilon_schedule(7)
    assert len(a) == 5
    assert all(abs(a[j] / a[j + 1] - 10) < 1e-9 for j in range(4))
    assert 0 < abs(a[0] * 10) < 1


def test_eps_zero_is_unperturbed():
    g = parse("x^4*sin(x)")
    eq = EulerEquation(QUARTIC)
    xs = np.linspace(1, 2, 9)
    base = evaluate_solution(solve_particular(eq, g), xs)
    assert np.array_equal(evaluate_solution(perturbed_solution(eq, g, 0.0), xs), base)


def test_weight_freezing():
    eq = EulerEquation(QUARTIC)
    g = parse("x^5*sin(x)")
    y0 = perturbed_solution(eq, g, 0.0)
    y1 = perturbed_solution(eq, g, 1e-3)
    assert y1.weights == y0.weights
    assert all(a == b + 1e-3 for a, b in zip(y1.exponents, y0.exponents))


def test_toy_against_analytic():
    y = perturbed_solution(TOY, parse("x^2"), 0.01)
    x = np.linspace(1, 2, 5)
    assert evaluate_solution(y, x) == pytest.approx(toy_exact(x, 0.01), rel=1e-12)


def test_toy_constant():
    g = parse("x^2")
    study = run_study(TOY, g, compact=(1.0, 2.0), seed=3)
    assert study.bound.check
    # d/d eps of y_eps at 0 is x^2 * 4/9, so C_K -> 16/9 on [1, 2]
    assert study.bound.C_K == pytest.approx(16 / 9, rel=0.5)
    assert study.bound.beta == 1


def test_bound_violation():
    eq = EulerEquation(QUARTIC)
    g = parse("x^4*sin(x)")
    assert gap_beta(g, [1, -2, 3, 0.5]) == 1
    with pytest.raises(BoundViolation):
        perturbed_solution(eq, g, 1.0)
    with pytest.raises(BoundViolation):
        run_study(eq, g, [0.1, -1.5, 0.01])


def test_fit_bound_needs_three_levels():
    study = PerturbationStudy(TOY, parse("x^2"), (0.1, 0.01))
    curves = error_curve(study)
    with pytest.raises(ValueError):
        fit_bound(curves, 1.0)
    assert run_study(TOY, parse("x^2"), (0.1, 0.01)).bound is None


def test_zero_eps_curve():
    curves = error_curve(PerturbationStudy(TOY, parse("x^2"), (0.0,)))
    assert not np.any(curves.errors)


def test_compact_validation():
    with pytest.raises(ValueError):
        PerturbationStudy(TOY, parse("x^2"), (0.1,), compact=(0.0, 1.0))


@pytest.mark.parametrize("g", TESTS)
def test_stability_shape(g):
    study = run_study(EulerEquation(QUARTIC), parse(g), seed=0)
    sup = study.curves.sup_norms
    assert np.all(np.diff(sup) < 0)
    ratios = sup[1:-1] / sup[2:]
    assert np.all((ratios >= 5) & (ratios <= 20))
    assert math.isfinite(study.bound.C_K) and study.bound.check


def test_study_deterministic():
    a = run_study(EulerEquation(QUARTIC), parse(TESTS[0]), seed=11, grid_points=64)
    b = run_study(EulerEquation(QUARTIC), parse(TESTS[0]), seed=11, grid_points=64)
    assert np.array_equal(a.curves.errors, b.curves.errors)


def test_per_root_keeps_conjugates_together():
    from atomcauchy import MonomialPolynomial
    from atomcauchy.charpoly import falling_coefficients

    eq = EulerEquation(falling_coefficients(MonomialPolynomial((-1, 1, -1, 1))))
    g = parse("x^3*sin(x)")
    y = perturbed_solution(eq, g, 1e-3, seed=5, per_root=True)
    ex = [complex(r) for r in y.exponents]
    upper = [z for z in ex if z.imag > 0]
    lower = [z for z in ex if z.imag < 0]
    assert upper[0] == pytest.approx(lower[0].conjugate())
    vals = evaluate_solution(y, np.array([1.0, 2.0]))
    assert np.all(np.isfinite(vals))
