"""Roots of the characteristic polynomial.

Global stage: eigenvalues of the (LAPACK-balanced) companion matrix via
``numpy.roots``.  Each estimate is then polished by Newton's method on the
exact coefficients in extended precision.  Real polynomials get exact
conjugate pairs and real roots snapped off the imaginary axis; rational
roots of rational polynomials are recovered exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from ._numeric import sort_key
from .atoms import check_distinct
from .charpoly import MonomialPolynomial
from .errors import MultipleRootDetected, NonConvergence

NEWTON_RTOL = 1e-13
RESIDUAL_RTOL = 1e-10
SNAP_RTOL = 1e-10
MAX_NEWTON = 50
_WORKPREC = 160
_MAX_DENOMINATOR = 10**6


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    max_residual: float

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def to_json(self):
        return [{"re": float(complex(r).real), "im": float(complex(r).imag)} for r in self.roots]


def residual_scale(p: MonomialPolynomial):
    return max(1.0, float(sum(abs(c) for c in p.coefficients)))


def _mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if isinstance(c, complex):
        return mpmath.mpc(c)
    return mpmath.mpf(c)


def _horner(coeffs, r):
    val = mpmath.mpf(0)
    der = mpmath.mpf(0)
    for c in reversed(coeffs):
        der = der * r + val
        val = val * r + c
    return val, der


def _newton(coeffs, r0, scale, real):
    r = mpmath.mpf(r0.real) if real else mpmath.mpc(r0)
    target = NEWTON_RTOL * scale
    for _ in range(MAX_NEWTON):
        val, der = _horner(coeffs, r)
        if abs(val) <= target * 1e-6:
            return r
        if der == 0:
            break
        step = val / der
        r -= step
        if abs(step) <= mpmath.mpf(2) ** (-_WORKPREC + 20) * (1 + abs(r)):
            return r
    val, _ = _horner(coeffs, r)
    if abs(val) <= target:
        return r
    raise NonConvergence(f"Newton refinement from {complex(r0)!r} stalled at |phi| = {float(abs(val)):.3e}")


def refine_root(p: MonomialPolynomial, r0):
    """Newton-polish ``r0`` to a root of ``p``; returns a float or complex."""
    coeffs = [_mp(c) for c in p.coefficients]
    real = p.is_real and not isinstance(r0, complex)
    with mpmath.workprec(_WORKPREC):
        r = _newton(coeffs, complex(r0), residual_scale(p), real)
        return complex(r) if isinstance(r, mpmath.mpc) else float(r)


def _snap_rational(p, r):
    q = Fraction(r).limit_denominator(_MAX_DENOMINATOR)
    if p(q) == 0:
        return q
    return r


def _scaled_residual(p, r, scale):
    coeffs = [_mp(c) for c in p.coefficients]
    with mpmath.workprec(_WORKPREC):
        val, _ = _horner(coeffs, _mp(r))
        return float(abs(val)) / scale


def _collision(i, j, ri, rj):
    return MultipleRootDetected(
        f"roots {i} and {j} coincide within tolerance ({ri!r}, {rj!r}); distinct roots are required"
    )


def find_roots(p: MonomialPolynomial) -> RootSet:
    """All ``deg p`` roots, sorted by real then imaginary part."""
    n = p.degree
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    scale = residual_scale(p)
    real = p.is_real
    desc = np.array([complex(c) if isinstance(c, complex) else float(c) for c in reversed(p.coefficients)])
    estimates = np.roots(desc)

    coeffs = [_mp(c) for c in p.coefficients]
    roots = []
    with mpmath.workprec(_WORKPREC):
        if real:
            # refine the closed upper half plane only; mirror the rest
            uppers = [z for z in estimates if z.imag > 0]
            reals = [z for z in estimates if z.imag == 0]
            for z in reals:
                roots.append(float(_newton(coeffs, complex(z), scale, True)))
            for z in uppers:
                w = _newton(coeffs, complex(z), scale, False)
                w = complex(w)
                if abs(w.imag) <= SNAP_RTOL * (1 + abs(w)):
                    x = float(_newton(coeffs, complex(w.real), scale, True))
                    roots.extend([x, x])
                else:
                    if w.imag < 0:
                        w = w.conjugate()
                    roots.extend([w, w.conjugate()])
        else:
            roots = [complex(_newton(coeffs, complex(z), scale, False)) for z in estimates]

    if p.is_exact:
        roots = [_snap_rational(p, r) if isinstance(r, float) else r for r in roots]
    roots.sort(key=sort_key)
    check_distinct(roots, error=_collision)

    worst = max(_scaled_residual(p, r, scale) for r in roots)
    if worst > RESIDUAL_RTOL:
        raise NonConvergence(f"root residual {worst:.3e} exceeds {RESIDUAL_RTOL:g}")
    return RootSet(tuple(roots), worst)
