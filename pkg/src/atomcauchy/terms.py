"""Right-hand sides of the form  sum c * x**p * ln(x)**k * trig(x).

Every forcing term used with the solver lives in this class: it is closed
under differentiation, under multiplication by powers of ``x`` and, for most
members, under the scaled integral ``x -> int_0^x s**(-r) f(s) ds``.

Coefficients and powers are kept as :class:`fractions.Fraction` whenever the
input is exact, so that the whole solve/residual pipeline can run in rational
arithmetic.  Floats and complex numbers are accepted too.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from ._numeric import as_exact, is_finite, is_integral, real_part, sort_key, to_inexact
from .errors import DivergentAtZero, DomainError, ParseError, UnsupportedFunction

__all__ = [
    "Trig",
    "Term",
    "Expression",
    "parse",
    "evaluate",
    "differentiate",
    "scaled_antiderivative",
]


class Trig(str, enum.Enum):
    NONE = "none"
    SIN = "sin"
    COS = "cos"


_TRIG_ORDER = {Trig.NONE: 0, Trig.SIN: 1, Trig.COS: 2}


@dataclass(frozen=True)
class Term:
    """``coeff * x**power * ln(x)**log_exp * trig(x)``."""

    coeff: object = Fraction(1)
    power: object = Fraction(0)
    log_exp: int = 0
    trig: Trig = Trig.NONE

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_exact(self.coeff))
        object.__setattr__(self, "power", as_exact(self.power))
        object.__setattr__(self, "trig", Trig(self.trig))
        if not isinstance(self.log_exp, int) or self.log_exp < 0:
            raise ValueError(f"log exponent must be a non-negative integer, got {self.log_exp!r}")
        if not (is_finite(self.coeff) and is_finite(self.power)):
            raise ValueError("term coefficient and power must be finite")

    @property
    def key(self):
        return (self.power, self.log_exp, self.trig)

    def sort_key(self):
        return (*sort_key(self.power), self.log_exp, _TRIG_ORDER[self.trig])

    def with_coeff(self, coeff):
        return Term(coeff, self.power, self.log_exp, self.trig)

    def times_power(self, coeff, power):
        """Multiply by ``coeff * x**power``."""
        return Term(self.coeff * coeff, self.power + power, self.log_exp, self.trig)

    def __call__(self, x):
        c = to_inexact(self.coeff)
        p = to_inexact(self.power)
        if isinstance(p, complex):
            val = c * np.exp(p * np.log(x))
        else:
            val = c * np.power(x, p)
        if self.log_exp:
            val = val * np.log(x) ** self.log_exp
        if self.trig is Trig.SIN:
            val = val * np.sin(x)
        elif self.trig is Trig.COS:
            val = val * np.cos(x)
        return val

    def derivative(self):
        c, p, k, trig = self.coeff, self.power, self.log_exp, self.trig
        out = []
        if p != 0:
            out.append(Term(c * p, p - 1, k, trig))
        if k:
            out.append(Term(c * k, p - 1, k - 1, trig))
        if trig is Trig.SIN:
            out.append(Term(c, p, k, Trig.COS))
        elif trig is Trig.COS:
            out.append(Term(-c, p, k, Trig.SIN))
        return out

    def __str__(self):
        return _format_term(self, leading=True)


def _merge(terms):
    acc = {}
    for t in terms:
        if t.key in acc:
            acc[t.key] = acc[t.key].with_coeff(acc[t.key].coeff + t.coeff)
        else:
            acc[t.key] = t
    kept = [t for t in acc.values() if t.coeff != 0]
    kept.sort(key=Term.sort_key)
    return tuple(kept)


@dataclass(frozen=True)
class Expression:
    """Canonical sum of :class:`Term` objects.

    Like terms are merged, zero terms dropped and the remainder ordered by
    ``(power, log_exp, trig)``, so ``==`` is structural equality.
    """

    terms: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "terms", _merge(self.terms))

    @classmethod
    def constant(cls, c):
        return cls((Term(c),))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, Expression):
            return NotImplemented
        return Expression(self.terms + other.terms)

    def __neg__(self):
        return Expression(tuple(t.with_coeff(-t.coeff) for t in self.terms))

    def __sub__(self, other):
        if not isinstance(other, Expression):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Expression):
            out = []
            for a in self.terms:
                for b in other.terms:
                    if a.trig is not Trig.NONE and b.trig is not Trig.NONE:
                        raise ValueError("product of two trigonometric factors leaves the term class")
                    trig = a.trig if a.trig is not Trig.NONE else b.trig
                    out.append(Term(a.coeff * b.coeff, a.power + b.power, a.log_exp + b.log_exp, trig))
            return Expression(tuple(out))
        other = as_exact(other)
        return Expression(tuple(t.with_coeff(t.coeff * other) for t in self.terms))

    __rmul__ = __mul__

    def times_power(self, coeff, power):
        return Expression(tuple(t.times_power(coeff, power) for t in self.terms))

    @property
    def is_exact(self):
        return all(isinstance(t.coeff, Rational) and isinstance(t.power, Rational) for t in self.terms)

    @property
    def is_real(self):
        return not any(isinstance(t.coeff, complex) or isinstance(t.power, complex) for t in self.terms)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [_format_term(self.terms[0], leading=True)]
        for t in self.terms[1:]:
            parts.append(_format_term(t, leading=False))
        return "".join(parts)


# --------------------------------------------------------------------------- printing


def _format_number(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"({v.numerator}/{v.denominator})"
    if isinstance(v, complex):
        return f"({v!r})"
    return repr(float(v))


def _format_exponent(p):
    if isinstance(p, Fraction):
        return str(p) if p.denominator != 1 else str(p.numerator)
    if isinstance(p, complex):
        return f"({p!r})"
    return repr(float(p))


def _is_negative(c):
    return not isinstance(c, complex) and c < 0


def _format_term(t, leading):
    c = t.coeff
    negative = _is_negative(c)
    mag = -c if negative else c
    factors = []
    if t.power != 0:
        factors.append("x" if t.power == 1 else f"x^{_format_exponent(t.power)}")
    if t.log_exp:
        factors.append("ln(x)" if t.log_exp == 1 else f"ln(x)^{t.log_exp}")
    if t.trig is not Trig.NONE:
        factors.append(f"{t.trig.value}(x)")
    if mag != 1 or not factors:
        factors.insert(0, _format_number(mag))
    body = "*".join(factors)
    if leading:
        return f"-{body}" if negative else body
    return f" - {body}" if negative else f" + {body}"


# --------------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>\d+/\d+|\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^()])"
    r")"
)


def _tokenize(source):
    tokens = []
    pos = 0
    source = source.rstrip()
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        if kind is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


def _number(text):
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ZeroDivisionError
        return Fraction(int(p), int(q))
    if re.fullmatch(r"\d+", text):
        return Fraction(int(text))
    return float(text)


class _Parser:
    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.tok
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        return self.advance()

    def parse(self):
        e = self.expr()
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return e

    def expr(self):
        sign = 1
        if self.tok[0] == "op" and self.tok[1] in "+-":
            sign = -1 if self.advance()[1] == "-" else 1
        e = self.term() * sign
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.factor()
        while self.tok[0] == "op" and self.tok[1] == "*":
            pos = self.advance()[2]
            rhs = self.factor()
            try:
                e = e * rhs
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
        return e

    def signed_number(self):
        if self.tok[0] == "op" and self.tok[1] == "(":
            self.advance()
            v = self.signed_number()
            self.expect("op", ")")
            return v
        sign = 1
        if self.tok[0] == "op" and self.tok[1] in "+-":
            sign = -1 if self.advance()[1] == "-" else 1
        tok = self.expect("number")
        try:
            return sign * _number(tok[1])
        except ZeroDivisionError:
            raise ParseError("zero denominator", tok[2]) from None

    def call_on_x(self):
        self.expect("op", "(")
        self.expect("name", "x")
        self.expect("op", ")")

    def factor(self):
        kind, text, pos = self.tok
        if kind == "number":
            self.advance()
            try:
                return Expression.constant(_number(text))
            except ZeroDivisionError:
                raise ParseError("zero denominator", pos) from None
        if kind == "op" and text == "(":
            self.advance()
            e = self.expr()
            self.expect("op", ")")
            return e
        if kind == "name":
            self.advance()
            if text == "x":
                power = Fraction(1)
                if self.tok[0] == "op" and self.tok[1] == "^":
                    self.advance()
                    power = self.signed_number()
                return Expression((Term(1, power),))
            if text in ("ln", "log"):
                self.call_on_x()
                k = 1
                if self.tok[0] == "op" and self.tok[1] == "^":
                    self.advance()
                    tok = self.expect("number")
                    if not re.fullmatch(r"\d+", tok[1]):
                        raise ParseError("logarithm power must be a non-negative integer", tok[2])
                    k = int(tok[1])
                return Expression((Term(1, 0, k),))
            if text in ("sin", "cos"):
                self.call_on_x()
                return Expression((Term(1, 0, 0, Trig(text)),))
            if self.tok[0] == "op" and self.tok[1] == "(":
                raise UnsupportedFunction(f"unsupported function {text!r}", pos)
            raise ParseError(f"unknown symbol {text!r}", pos)
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse(source: str) -> Expression:
    """Parse a right-hand side such as ``"x^6*(sin(x)+cos(x))"``.

    Parenthesised sums are distributed immediately; decimals become floats
    while integers and ``p/q`` literals stay exact.
    """
    return _Parser(source).parse()


# --------------------------------------------------------------------------- calculus


def evaluate(e: Expression, x):
    """Evaluate at ``x > 0`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0) or np.any(np.isnan(arr)):
        raise DomainError(f"expressions are defined for x > 0 only, got {x!r}")
    total = np.zeros_like(arr)
    for t in e.terms:
        total = total + t(arr)
    if np.ndim(x) == 0:
        return total[()]
    return total


def magnitude(e: Expression, x):
    """``sum |term(x)|``: the scale against which cancellation in :func:`evaluate` is judged."""
    arr = np.asarray(x, dtype=float)
    total = np.zeros_like(arr)
    for t in e.terms:
        total = total + np.abs(t(arr))
    return total


def evaluate_precise(e: Expression, xs, dps=50):
    """Evaluate in ``dps``-digit arithmetic and round to float (real expressions only).

    Worth it when large terms cancel, e.g. closed-form solutions near x = 1.
    """
    import mpmath

    if not e.is_real:
        raise ValueError("precise evaluation supports real expressions only")
    trig = {Trig.NONE: lambda v: 1, Trig.SIN: mpmath.sin, Trig.COS: mpmath.cos}

    def num(v):
        if isinstance(v, Fraction):
            return mpmath.mpf(v.numerator) / v.denominator
        return mpmath.mpf(v)

    out = np.empty(np.shape(xs), dtype=float)
    flat = np.ravel(np.asarray(xs, dtype=float))
    with mpmath.workdps(dps):
        for idx, x in enumerate(flat):
            if not x > 0:
                raise DomainError(f"expressions are defined for x > 0 only, got {x!r}")
            xm = mpmath.mpf(x)
            lx = mpmath.log(xm)
            acc = mpmath.mpf(0)
            for t in e.terms:
                acc += num(t.coeff) * xm ** num(t.power) * lx**t.log_exp * trig[t.trig](xm)
            out.flat[idx] = float(acc)
    return out


def differentiate(e: Expression) -> Expression:
    out = []
    for t in e.terms:
        out.extend(t.derivative())
    return Expression(tuple(out))


def _power_log_integral(coeff, m, k):
    """Terms of int_0^x c s**m ln(s)**k ds, assuming Re(m) > -1.

    Uses  int s^m ln^k = s^(m+1)/(m+1) ln^k - k/(m+1) int s^m ln^(k-1).
    """
    out = []
    scale = coeff
    for j in range(k, -1, -1):
        scale = scale / (m + 1)
        out.append(Term(scale, m + 1, j))
        scale = -scale * j
    return out


def _trig_indefinite(coeff, m, trig):
    """Antiderivative of c s**m trig(s) for integer m >= 0 (no constant)."""
    # int s^m sin = -s^m cos + m int s^(m-1) cos
    # int s^m cos =  s^m sin - m int s^(m-1) sin
    out = []
    c = coeff
    while True:
        if trig is Trig.SIN:
            out.append(Term(-c, m, 0, Trig.COS))
            c, trig = c * m, Trig.COS
        else:
            out.append(Term(c, m, 0, Trig.SIN))
            c, trig = -c * m, Trig.SIN
        if m == 0:
            return out
        m -= 1


def scaled_antiderivative(t: Term, r):
    """Closed form of ``int_0^x s**(-r) * t(s) ds``, or ``None`` if there is none.

    Raises :class:`DivergentAtZero` when the integral does not converge at 0.
    ``None`` is returned for trigonometric terms whose shifted power is not a
    non-negative integer, or which carry a logarithm.
    """
    r = as_exact(r)
    m = t.power - r
    if not real_part(m) > -1:
        raise DivergentAtZero(f"int_0^x s^(-{r}) * {t} ds diverges at 0 (exponent {m})")
    if t.trig is Trig.NONE:
        return Expression(tuple(_power_log_integral(t.coeff, m, t.log_exp)))
    if t.log_exp or not is_integral(m):
        return None
    m_int = int(real_part(m)) if not isinstance(m, Fraction) else m.numerator
    terms = _trig_indefinite(t.coeff, m_int, t.trig)
    # subtract the antiderivative's value at 0: only power-0 cos terms survive
    at_zero = sum((u.coeff for u in terms if u.power == 0 and u.trig is Trig.COS), Fraction(0))
    if at_zero != 0:
        terms.append(Term(-at_zero, 0))
    return Expression(tuple(terms))


def integrand_expression(g: Expression, r) -> Expression:
    """``s**(-r) * g(s)`` as an expression."""
    return g.times_power(1, -as_exact(r))


def leading_power(g: Expression):
    """Smallest real part among the powers of ``g`` (``math.inf`` when empty)."""
    if not g.terms:
        return math.inf
    return min(real_part(t.power) for t in g.terms)
