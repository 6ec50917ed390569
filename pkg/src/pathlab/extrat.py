"""Extended nonnegative-friendly rationals: exact ``Fraction`` values plus ``+inf``.

Finite values are plain :class:`fractions.Fraction` objects. Infinity is the
float ``math.inf``; it compares correctly against fractions and absorbs
addition.  There is no ``-inf`` and no NaN: any operation that would produce
one raises.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

ExtRat = Union[Fraction, float]


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def ext(x) -> ExtRat:
    """Coerce ``x`` (int, Fraction, str, or inf) to an extended rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"unsupported float {x!r}")
        # floats are accepted only when they are exactly representable
        return Fraction(x)
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an extended rational")


def parse(s: str) -> ExtRat:
    s = s.strip()
    if s in ("inf", "+inf", "∞"):
        return INF
    if not s or "." in s or "e" in s.lower():
        raise ValueError(f"not a canonical rational: {s!r}")
    return Fraction(s)


def fmt(x: ExtRat) -> str:
    """Canonical string: ``"p/q"`` in lowest terms (``"p"`` when q=1) or ``"inf"``."""
    if is_inf(x):
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def add(a: ExtRat, b: ExtRat) -> ExtRat:
    if is_inf(a) or is_inf(b):
        return INF
    return a + b


def sub(a: ExtRat, b: ExtRat) -> ExtRat:
    if is_inf(b):
        raise ArithmeticError("subtracting infinity is undefined here")
    if is_inf(a):
        return INF
    return a - b


def mul(a: ExtRat, b: ExtRat) -> ExtRat:
    if is_inf(a) or is_inf(b):
        if a == 0 or b == 0:
            raise ArithmeticError("0 * inf is undefined here")
        if a < 0 or b < 0:
            raise ArithmeticError("negative infinity is not representable")
        return INF
    return a * b


def total(values) -> ExtRat:
    s: ExtRat = Fraction(0)
    for v in values:
        s = add(s, v)
    return s
