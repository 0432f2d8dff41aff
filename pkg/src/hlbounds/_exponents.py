"""Helpers for extended-real exponents (rationals, floats and infinity)."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real

Exponent = Fraction | float


def as_exponent(p) -> Exponent:
    """Normalise an exponent argument.

    Integers, ``Fraction`` and strings such as ``"7/2"`` become exact
    ``Fraction`` values; ``"inf"`` and ``math.inf`` become ``math.inf``;
    other floats are kept as floats.
    """
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo", "+inf"):
            return math.inf
        try:
            return Fraction(s)
        except ValueError:
            return float(s)
    if isinstance(p, bool):
        raise TypeError("exponent must be a number, not bool")
    if isinstance(p, (int, Fraction)):
        return Fraction(p)
    if isinstance(p, Real):
        p = float(p)
        if math.isnan(p):
            raise ValueError("exponent is NaN")
        return p
    raise TypeError(f"cannot interpret {p!r} as an exponent")


def is_inf(p) -> bool:
    return isinstance(p, float) and math.isinf(p)


def conjugate(p) -> Exponent:
    """Conjugate exponent p* with 1/p + 1/p* = 1 (1 <-> inf)."""
    p = as_exponent(p)
    if p < 1:
        raise ValueError(f"conjugate exponent needs p >= 1, got {p}")
    if is_inf(p):
        return Fraction(1)
    if p == 1:
        return math.inf
    return p / (p - 1)


def to_float(p) -> float:
    return float(p)


def split_rational(p) -> tuple[str, str]:
    """(numerator, denominator) strings used by the CSV emitters."""
    p = as_exponent(p)
    if is_inf(p):
        return "inf", "1"
    if isinstance(p, Fraction):
        return str(p.numerator), str(p.denominator)
    return repr(p), "1"


def format_exponent(p) -> str:
    p = as_exponent(p)
    if is_inf(p):
        return "inf"
    return str(p) if isinstance(p, Fraction) else repr(p)
