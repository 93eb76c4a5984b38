"""Equation data and the characteristic polynomial in falling-factorial form.

The equation  sum_i a_i x**i y^(i) = g  has characteristic polynomial
phi(r) = sum_i a_i r(r-1)...(r-i+1).  Conversions between that basis and the
monomial basis are done by exact polynomial multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from ._numeric import as_exact


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class MonomialPolynomial:
    """Ascending coefficients ``c_0 .. c_n``."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(as_exact(c) for c in self.coefficients))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[-1]

    @property
    def is_exact(self):
        return all(isinstance(c, Rational) for c in self.coefficients)

    @property
    def is_real(self):
        return not any(isinstance(c, complex) for c in self.coefficients)

    def __call__(self, r):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * r + c
        return acc

    def derivative(self):
        return MonomialPolynomial(tuple(i * c for i, c in enumerate(self.coefficients))[1:] or (0,))

    def __mul__(self, other):
        p, q = self.coefficients, other.coefficients
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return MonomialPolynomial(tuple(out))

    def __add__(self, other):
        p, q = self.coefficients, other.coefficients
        n = max(len(p), len(q))
        p = p + (0,) * (n - len(p))
        q = q + (0,) * (n - len(q))
        return MonomialPolynomial(tuple(a + b for a, b in zip(p, q)))

    def scaled(self, c):
        return MonomialPolynomial(tuple(c * a for a in self.coefficients))

    @classmethod
    def from_roots(cls, roots, leading=1):
        poly = cls((as_exact(leading),))
        for r in roots:
            poly = poly * cls((-as_exact(r), 1))
        return poly


@lru_cache(maxsize=None)
def _falling(i):
    coeffs = (Fraction(1),)
    for s in range(i):
        # multiply by (r - s)
        shifted = (Fraction(0),) + coeffs
        scaled = tuple(-s * c for c in coeffs) + (Fraction(0),)
        coeffs = tuple(a + b for a, b in zip(shifted, scaled))
    return coeffs


def falling_factorial(i: int) -> MonomialPolynomial:
    """Monomial coefficients of r(r-1)...(r-i+1) (signed Stirling numbers of the first kind)."""
    if i < 0:
        raise ValueError("falling factorial order must be non-negative")
    return MonomialPolynomial(_falling(i))


@dataclass(frozen=True)
class EulerEquation:
    """Coefficients ``a_0 .. a_n`` of  sum a_i x**i y^(i) = g, ascending."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(as_exact(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ValueError("a Cauchy-Euler equation needs order n >= 1")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient a_n must be non-zero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self):
        return len(self.coefficients) - 1

    @property
    def is_exact(self):
        return all(isinstance(c, Rational) for c in self.coefficients)

    @property
    def is_real(self):
        return not any(isinstance(c, complex) for c in self.coefficients)

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["coefficients"]))

    def to_json(self):
        return {"coefficients": [str(c) for c in self.coefficients]}

    @classmethod
    def from_roots(cls, roots, leading=1):
        """Equation whose characteristic polynomial is ``leading * prod (r - r_i)``."""
        return cls(falling_coefficients(MonomialPolynomial.from_roots(roots, leading)))


def build_charpoly(eq: EulerEquation) -> MonomialPolynomial:
    total = MonomialPolynomial((0,))
    for i, a in enumerate(eq.coefficients):
        if a != 0:
            total = total + falling_factorial(i).scaled(a)
    return total


def eval_charpoly_falling(eq: EulerEquation, r):
    """phi(r) evaluated directly in the falling-factorial basis."""
    total = 0
    ff = 1
    for i, a in enumerate(eq.coefficients):
        total += a * ff
        ff *= r - i
    return total


def falling_coefficients(p: MonomialPolynomial):
    """Inverse basis change: coefficients ``a_i`` with  p(r) = sum a_i r^(falling i)."""
    rest = list(p.coefficients)
    n = len(rest) - 1
    out = [0] * (n + 1)
    for i in range(n, -1, -1):
        a = rest[i]
        out[i] = a
        if a != 0:
            for k, c in enumerate(_falling(i)):
                rest[k] -= a * c
    return tuple(out)
