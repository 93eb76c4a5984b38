"""Small helpers for mixing exact rationals with float/complex scalars."""

from fractions import Fraction
from numbers import Rational

import numpy as np


def as_exact(value):
    """Coerce ints, rational strings and Fractions to Fraction; leave floats/complex alone."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (np.integer,)):
        return Fraction(int(value))
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.complexfloating,)):
        return complex(value)
    return value


def is_exact(value):
    return isinstance(value, Rational)


def real_part(value):
    if isinstance(value, complex):
        return value.real
    return value


def imag_part(value):
    if isinstance(value, complex):
        return value.imag
    return 0


def to_inexact(value):
    """Fraction -> float; complex with zero imaginary part -> float."""
    if isinstance(value, Rational):
        return float(value)
    if isinstance(value, complex):
        return value.real if value.imag == 0 else value
    return value


def is_integral(value):
    if isinstance(value, Rational):
        return Fraction(value).denominator == 1
    if isinstance(value, complex):
        return value.imag == 0 and float(value.real).is_integer()
    return float(value).is_integer()


def sort_key(value):
    return (float(real_part(value)), float(imag_part(value)))


def is_finite(value):
    if isinstance(value, Rational):
        return True
    return bool(np.isfinite(value))
