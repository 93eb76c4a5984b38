"""The scaled integral  I_r(g)(x) = int_0^x t**(-r) g(t) dt.

A handle is closed-form when every term of ``t**(-r) g(t)`` has an
antiderivative in the term class, and quadrature-backed otherwise.  The
quadrature path treats the (possibly singular) left end analytically on
``(0, x * 2**-20]`` and integrates a dyadically graded mesh above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ._numeric import as_exact, real_part, to_inexact
from .errors import DivergentAtZero, DomainError
from .quadrature import MAX_PANELS, cumulative_integral
from .terms import (
    Expression,
    Trig,
    _power_log_integral,
    integrand_expression,
    magnitude,
    scaled_antiderivative,
)

DEFAULT_TOL = 1e-10
HEAD_LEVELS = 20
_TAYLOR_MAX = 40
# closed forms losing more than this fraction of their digits near 0 are redone by series
CANCEL_RTOL = 1e-6
SERIES_XMAX = 1.0


@dataclass(frozen=True)
class GrowthBound:
    """``|g(t)| <= C * t**alpha``."""

    C: float
    alpha: float


@dataclass(frozen=True)
class IntegralHandle:
    shift: object
    integrand: Union[Expression, Callable]
    mode: str
    closed_form: Optional[Expression] = None
    growth: Optional[GrowthBound] = None

    @property
    def is_closed_form(self):
        return self.mode == "closed_form"

    def shifted_integrand(self):
        """Callable ``t -> t**(-shift) * g(t)`` on arrays."""
        if isinstance(self.integrand, Expression):
            expr = integrand_expression(self.integrand, self.shift)
            return lambda t: _eval_terms(expr, t)
        r = to_inexact(self.shift)
        g = self.integrand

        def f(t):
            return np.exp(-r * np.log(t)) * g(t)

        return f


def _eval_terms(expr, t):
    total = 0.0
    for term in expr.terms:
        total = total + term(t)
    if isinstance(total, float):
        return np.zeros_like(t)
    return total


def make_integral(g, r, *, force_quadrature=False, growth=None) -> IntegralHandle:
    """Validate convergence at 0 and pick closed-form or quadrature mode.

    ``g`` is an :class:`Expression` or, for right-hand sides outside the term
    class, a vectorised callable together with its :class:`GrowthBound`.
    """
    r = as_exact(r)
    if not isinstance(g, Expression):
        if growth is None:
            raise ValueError("a black-box right-hand side needs a GrowthBound")
        if not growth.alpha - real_part(r) > -1:
            raise DivergentAtZero(
                f"t^(-{r}) g(t) with |g| <= C t^{growth.alpha} is not integrable at 0"
            )
        return IntegralHandle(r, g, "quadrature", None, growth)

    pieces = []
    for t in g.terms:
        try:
            pieces.append(scaled_antiderivative(t, r))
        except DivergentAtZero:
            raise DivergentAtZero(
                f"term {t} is not integrable against t^(-{r}) at 0 "
                f"(needs power - Re(shift) > -1, got {t.power} - {r})"
            ) from None
    if force_quadrature or any(p is None for p in pieces):
        return IntegralHandle(r, g, "quadrature", None, growth)
    return IntegralHandle(r, g, "closed_form", sum(pieces, Expression()), growth)


def _head_expression(expr, delta):
    """int_0^delta of an expression integrand, trig factors replaced by Taylor series."""
    total = 0.0
    err = 0.0
    for t in expr.terms:
        c = to_inexact(t.coeff)
        m = to_inexact(t.power)
        if t.trig is Trig.NONE:
            series = [(c, m)]
        else:
            odd = 1 if t.trig is Trig.SIN else 0
            series = [
                (c * (-1) ** j / math.factorial(2 * j + odd), m + 2 * j + odd)
                for j in range(_TAYLOR_MAX)
            ]
        last = 0.0
        for i, (coeff, power) in enumerate(series):
            piece = sum(
                u(delta) for u in _power_log_integral(coeff, power, t.log_exp)
            )
            total += piece
            last = abs(piece)
            if i and last <= 1e-18 * abs(total):
                break
        err += last
    return total, err


def _head_blackbox(f, delta):
    """Leading power-law asymptotics of a black-box integrand on (0, delta]."""
    f1, f2 = f(np.array([delta, 0.5 * delta]))
    if f1 == 0 or f2 == 0:
        return 0.0, abs(f1) * delta
    a = math.log(abs(f1 / f2)) / math.log(2.0)
    if not a > -1:
        raise DivergentAtZero(f"integrand behaves like t^{a:.3f} near 0")
    value = f1 * delta / (a + 1)
    coarse = f2 * 0.5 * delta / (a + 1) * 2 ** (a + 1)
    return value, abs(value - coarse)


def _closed_values(h, xs):
    values = np.asarray(_eval_terms(h.closed_form, xs)) + np.zeros_like(xs)
    bad = cancelled(values, magnitude(h.closed_form, xs), xs)
    if np.any(bad):
        # e.g. -720 + 720 cos x + ... ~ x**8 / 8: sum the integrand's Taylor series instead
        expr = integrand_expression(h.integrand, h.shift)
        values = values.copy()
        for i in np.flatnonzero(bad):
            values.flat[i] = _head_expression(expr, float(xs.flat[i]))[0]
    return values


def cancelled(values, scale, xs):
    """Points near 0 where ``values`` lost most digits against the term ``scale``."""
    return (np.abs(values) < CANCEL_RTOL * scale) & (xs <= SERIES_XMAX)


def eval_integral_many(h: IntegralHandle, xs, tol=DEFAULT_TOL):
    """Vector of ``I(x)`` for every ``x`` in ``xs`` (one cumulative quadrature sweep)."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return xs.copy()
    if np.any(xs <= 0) or not np.all(np.isfinite(xs)):
        raise DomainError("the integral is evaluated for x > 0 only")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if h.is_closed_form:
        return _closed_values(h, xs)

    grid, inverse = np.unique(xs, return_inverse=True)
    delta = grid[0] * 2.0**-HEAD_LEVELS
    breakpoints = np.concatenate([delta * 2.0 ** np.arange(HEAD_LEVELS), grid])
    f = h.shifted_integrand()
    if isinstance(h.integrand, Expression):
        head, head_err = _head_expression(integrand_expression(h.integrand, h.shift), delta)
    else:
        head, head_err = _head_blackbox(f, delta)
    values, _ = cumulative_integral(f, breakpoints, tol, head, head_err, max_panels=MAX_PANELS)
    return values[HEAD_LEVELS:][inverse].reshape(xs.shape)


def eval_integral(h: IntegralHandle, x, tol=DEFAULT_TOL):
    """``I(x)`` at one point ``x > 0``."""
    return eval_integral_many(h, np.array([x], dtype=float), tol)[0]


def verify_growth(g: Expression, x_max, samples=1000) -> GrowthBound:
    """Fit ``|g(t)| <= C t**alpha`` on log-spaced samples of ``(0, x_max]``.

    ``alpha`` is the smallest power present in ``g``; ``C`` is the largest
    sampled ratio, so the bound holds on every sample.
    """
    if not g.terms:
        return GrowthBound(0.0, math.inf)
    alpha = float(min(real_part(t.power) for t in g.terms))
    t = np.geomspace(x_max * 1e-6, x_max, samples)
    ratio = np.abs(_eval_terms(g, t)) / t**alpha
    return GrowthBound(float(np.max(ratio)), alpha)


__all__ = [
    "GrowthBound",
    "IntegralHandle",
    "make_integral",
    "eval_integral",
    "eval_integral_many",
    "verify_growth",
    "DEFAULT_TOL",
]
