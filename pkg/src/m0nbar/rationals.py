"""Exact rational scalars.

Every number in this package is an exact arbitrary-precision rational:
always in lowest terms, denominator positive.  ``gmpy2.mpq`` is used when
available (it is an order of magnitude faster); otherwise the stdlib
``fractions.Fraction`` is a drop-in replacement.  Floats never appear.
"""
from __future__ import annotations

import numbers
from fractions import Fraction

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    Rational = Fraction

Rat = Rational  # short alias used throughout the package


def is_scalar(x) -> bool:
    """True for anything usable as an exact scalar coefficient."""
    return isinstance(x, numbers.Rational)


def as_integer(x) -> int:
    """Convert an exact scalar known to be integral; raise otherwise."""
    if isinstance(x, int):
        return x
    if x.denominator != 1:
        raise ValueError(f"not an integer: {x}")
    return int(x.numerator)


def format_exact(x) -> str:
    """Render a scalar as 'p' or 'p/q' (never a float)."""
    if isinstance(x, int):
        return str(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{x.numerator}/{x.denominator}"
