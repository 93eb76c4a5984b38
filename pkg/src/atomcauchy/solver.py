"""Particular solutions of  sum_i a_i x**i y^(i)(x) = g(x).

With distinct characteristic roots r_1..r_n and atom weights A(r_i),

    y_p(x) = sum_i A(r_i) x**r_i * int_0^x t**(-r_i - 1) g(t) dt.

The sum is kept component-wise (weight, exponent, integral handle); when all
integrals are closed-form and the roots are real it is also collapsed into
a single :class:`Expression`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from numbers import Rational
from typing import Optional

import numpy as np

from ._numeric import as_exact, imag_part, real_part, to_inexact
from .atoms import compute_atoms
from .charpoly import EulerEquation, build_charpoly
from .errors import ExponentBelowRoots, ImaginaryResidue, ResonantExponent, StepUnderflow
from .integral import DEFAULT_TOL, IntegralHandle, cancelled, eval_integral_many, make_integral
from .roots import find_roots
from .terms import Expression, Term, differentiate, evaluate, evaluate_precise, magnitude

IMAG_RTOL = 1e-9
RESIDUAL_H_REL = 0.05
RESIDUAL_LEVELS = 3
MAX_NUMERIC_ORDER = 6


@dataclass(frozen=True)
class Component:
    weight: object
    exponent: object
    integral: IntegralHandle


@dataclass(frozen=True)
class ParticularSolution:
    components: tuple
    rhs: object
    equation: Optional[EulerEquation] = None
    closed_form: Optional[Expression] = None
    real: bool = True

    @property
    def weights(self):
        return tuple(c.weight for c in self.components)

    @property
    def exponents(self):
        return tuple(c.exponent for c in self.components)


def _is_real_number(z):
    return not isinstance(z, complex)


def _resonant(p, r):
    if isinstance(p, Rational) and isinstance(r, Rational):
        return p == r
    return abs(complex(p) - complex(r)) <= 1e-12 * (1 + abs(complex(r)))


def _check_resonance(g, exponents):
    if not isinstance(g, Expression):
        return
    for t in g.terms:
        for r in exponents:
            if _resonant(t.power, r):
                raise ResonantExponent(
                    f"right-hand side term {t} has power equal to characteristic root {r}"
                )


def solve_with_roots(
    exponents,
    g,
    *,
    weights=None,
    equation=None,
    real=None,
    force_quadrature=False,
    growth=None,
) -> ParticularSolution:
    """Assemble y_p from prescribed roots.

    ``weights`` defaults to the atom weights of ``exponents``; passing them
    explicitly lets callers keep weights frozen while moving the exponents.
    """
    exponents = tuple(as_exact(r) for r in exponents)
    if weights is None:
        weights = tuple(compute_atoms(exponents))
    if len(weights) != len(exponents):
        raise ValueError("weights and exponents are not aligned")
    if real is None:
        eq_real = equation is None or equation.is_real
        g_real = not isinstance(g, Expression) or g.is_real
        real = eq_real and g_real and _conjugate_closed(exponents)
    _check_resonance(g, exponents)

    components = tuple(
        Component(w, r, make_integral(g, r + 1, force_quadrature=force_quadrature, growth=growth))
        for w, r in zip(weights, exponents)
    )
    closed = None
    if all(c.integral.is_closed_form for c in components) and all(_is_real_number(r) for r in exponents):
        closed = Expression()
        for c in components:
            closed = closed + c.integral.closed_form.times_power(c.weight, c.exponent)
    return ParticularSolution(components, g, equation, closed, real)


def _conjugate_closed(exponents):
    values = [complex(r) for r in exponents if isinstance(r, complex) and r.imag != 0]
    return sorted(values, key=lambda z: (z.real, z.imag)) == sorted(
        (z.conjugate() for z in values), key=lambda z: (z.real, z.imag)
    )


def solve_particular(eq: EulerEquation, g, *, force_quadrature=False, growth=None) -> ParticularSolution:
    """y_p for ``eq`` with right-hand side ``g`` (Expression or black-box callable)."""
    roots = find_roots(build_charpoly(eq))
    return solve_with_roots(
        roots.roots, g, equation=eq, force_quadrature=force_quadrature, growth=growth
    )


def solve_polynomial_rhs(eq: EulerEquation, b) -> Expression:
    """Closed form for g = sum_j b_j x**j:  sum_{i,j} b_j A(r_i) / (j - r_i) x**j."""
    b = {as_exact(j): as_exact(v) for j, v in dict(b).items() if v != 0}
    if not b:
        return Expression()
    roots = find_roots(build_charpoly(eq)).roots
    weights = compute_atoms(roots)
    top = max(real_part(r) for r in roots)
    terms = []
    for j, bj in b.items():
        for r in roots:
            if _resonant(j, r):
                raise ResonantExponent(f"power {j} coincides with characteristic root {r}")
        if not real_part(j) > top:
            raise ExponentBelowRoots(f"power {j} must exceed every root's real part (max {top})")
        coeff = sum(bj * w / (j - r) for w, r in zip(weights, roots))
        if isinstance(coeff, complex) and eq.is_real and _is_real_number(bj):
            if abs(coeff.imag) > IMAG_RTOL * max(abs(coeff.real), 1e-300):
                raise ImaginaryResidue(f"coefficient of x^{j} has imaginary part {coeff.imag:.3e}")
            coeff = coeff.real
        terms.append(Term(coeff, j))
    return Expression(tuple(terms))


def _pairing(y: ParticularSolution):
    """(component, factor) pairs: factor 2 means 'take twice the real part'."""
    if not y.real:
        return [(c, 1) for c in y.components]
    out = []
    lower = []
    for c in y.components:
        im = imag_part(c.exponent)
        if im == 0:
            out.append((c, 1))
        elif im > 0:
            out.append((c, 2))
        else:
            lower.append(c.exponent)
    uppers = sorted((complex(c.exponent).conjugate() for c, f in out if f == 2), key=lambda z: (z.real, z.imag))
    if uppers != sorted((complex(z) for z in lower), key=lambda z: (z.real, z.imag)):
        raise ImaginaryResidue("complex roots are not closed under conjugation for a real problem")
    return out


def _power(x, r):
    if isinstance(r, complex):
        return np.exp(r * np.log(x))
    return np.power(x, float(r))


def _component(c, xs, tol):
    w = complex(c.weight) if isinstance(c.weight, complex) else float(c.weight)
    return w * _power(xs, c.exponent) * eval_integral_many(c.integral, xs, tol)


def evaluate_components(y: ParticularSolution, x, tol=DEFAULT_TOL, *, precise=False):
    """Component sum  sum_i A(r_i) x**r_i I_i(x), conjugate-paired for real problems.

    ``precise=True`` evaluates the merged closed-form part in extended precision.
    """
    xs = np.asarray(x, dtype=float)
    flat = xs.ravel()
    total = np.zeros(flat.shape, dtype=complex if not y.real else float)
    # real closed-form components are merged exactly first: less cancellation
    merged = Expression()
    merged_parts = []
    rest = []
    for c, factor in _pairing(y):
        if factor == 1 and c.integral.is_closed_form and _is_real_number(c.exponent):
            merged = merged + c.integral.closed_form.times_power(c.weight, c.exponent)
            merged_parts.append(c)
        else:
            rest.append((c, factor))
    if merged:
        if precise and merged.is_real:
            # 50 digits absorb the cancellation that the float path must route around
            part = evaluate_precise(merged, flat)
        else:
            part = evaluate(merged, flat)
            bad = cancelled(part, magnitude(merged, flat), flat)
            if np.any(bad):
                part = part.copy()
                part[bad] = sum(_component(c, flat[bad], tol) for c in merged_parts)
        total = total + part
    for c, factor in rest:
        term = _component(c, flat, tol)
        if factor == 2:
            total = total + 2 * np.real(term)
        elif y.real and np.iscomplexobj(term):
            scale = np.maximum(np.abs(term.real), 1e-300)
            if np.any(np.abs(term.imag) > IMAG_RTOL * scale):
                raise ImaginaryResidue("real root produced a complex component")
            total = total + term.real
        else:
            total = total + term
    total = total.reshape(xs.shape)
    return total[()] if xs.ndim == 0 else total


def evaluate_solution(y: ParticularSolution, x, tol=DEFAULT_TOL, *, use_closed_form=True):
    """y_p(x) for scalar or array ``x > 0``.

    Uses the collapsed closed form when there is one, otherwise the
    component sum (quadrature where needed).
    """
    if use_closed_form and y.closed_form is not None:
        values = evaluate(y.closed_form, x)
        xs = np.asarray(x, dtype=float)
        bad = cancelled(values, magnitude(y.closed_form, xs), xs)
        if not np.any(bad):
            return values
        if xs.ndim == 0:
            return evaluate_components(y, x, tol)
        values = values.copy()
        values[bad] = evaluate_components(y, xs[bad], tol)
        return values
    return evaluate_components(y, x, tol)


def evaluate_reflected(y: ParticularSolution, x, tol=DEFAULT_TOL):
    """Evaluate at ``|x|``, the customary continuation to x < 0."""
    return evaluate_solution(y, np.abs(np.asarray(x, dtype=float)), tol)


def residual(eq: EulerEquation, y: Expression) -> Expression:
    """Exact  sum a_i x**i y^(i)  by term-wise differentiation."""
    total = Expression()
    deriv = y
    for i, a in enumerate(eq.coefficients):
        if i:
            deriv = differentiate(deriv)
        if a != 0:
            total = total + deriv.times_power(a, i)
    return total


def _central_weights(k):
    """Exact weights of the (2s+1)-point central stencil for the k-th derivative."""
    s = max(1, ceil(k / 2))
    offsets = list(range(-s, s + 1))
    size = len(offsets)
    # solve sum_j w_j j**m / m! = delta_{mk}, m = 0..2s
    rows = [[Fraction(j) ** m for j in offsets] for m in range(size)]
    fact = 1
    rhs = []
    for m in range(size):
        if m:
            fact *= m
        rhs.append(Fraction(fact) if m == k else Fraction(0))
    mat = [row + [v] for row, v in zip(rows, rhs)]
    for col in range(size):
        piv = next(r for r in range(col, size) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        for r in range(size):
            if r != col and mat[r][col] != 0:
                f = mat[r][col] / mat[col][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return offsets, [float(mat[i][-1] / mat[i][i]) for i in range(size)]


def residual_numeric(
    eq: EulerEquation,
    y: ParticularSolution,
    x,
    *,
    h_rel=RESIDUAL_H_REL,
    levels=RESIDUAL_LEVELS,
    tol=1e-13,
):
    """``sum a_i x**i y^(i)(x) - g(x)`` with Richardson-extrapolated central differences."""
    n = eq.order
    if n > MAX_NUMERIC_ORDER:
        raise ValueError(f"numeric residual supports order <= {MAX_NUMERIC_ORDER}, got {n}")
    x = float(x)
    h0 = x * h_rel
    s_max = max(1, ceil(n / 2))
    if not x > 0 or h0 <= 1e3 * np.finfo(float).eps * x or x - s_max * h0 <= 0 or h0**n == 0:
        raise StepUnderflow(f"x = {x!r} is too small for a stable order-{n} stencil")

    stencils = [_central_weights(k) for k in range(1, n + 1)]
    steps = [h0 / 2**l for l in range(levels)]
    points = sorted({x + j * h for h in steps for offs, _ in stencils for j in offs})
    values = dict(zip(points, evaluate_components(y, np.array(points), tol, precise=True)))

    derivs = [values[x]]
    for k, (offs, w) in enumerate(stencils, start=1):
        table = [sum(wj * values[x + j * h] for j, wj in zip(offs, w)) / h**k for h in steps]
        # Richardson on the h**2 error expansion
        for lev in range(1, levels):
            factor = 4.0**lev
            table = [(factor * table[i + 1] - table[i]) / (factor - 1) for i in range(len(table) - 1)]
        derivs.append(table[0])

    lhs = sum(to_inexact(a) * x**i * d for i, (a, d) in enumerate(zip(eq.coefficients, derivs)))
    g = y.rhs
    gx = evaluate(g, x) if isinstance(g, Expression) else g(np.array([x]))[0]
    return lhs - gx


__all__ = [
    "Component",
    "ParticularSolution",
    "solve_particular",
    "solve_with_roots",
    "solve_polynomial_rhs",
    "evaluate_solution",
    "evaluate_components",
    "evaluate_reflected",
    "residual",
    "residual_numeric",
]
