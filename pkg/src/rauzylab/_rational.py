"""Exact-rational plumbing: parsing, ``p/q`` serialisation and logs of big rationals."""
from __future__ import annotations

import math
from fractions import Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # decimal reading, so 0.2 means 1/5 and not its binary neighbour
        return Fraction(repr(x))
    return Fraction(x)


def to_pq(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def log_fraction(x) -> float:
    """Natural log of a positive rational whose parts may overflow a double."""
    x = as_fraction(x)
    if x <= 0:
        raise ValueError(f"log of nonpositive value {x}")
    d = x - 1
    if abs(d) < Fraction(1, 2):
        # near 1 the two big logs would cancel; x - 1 is exact
        return math.log1p(d.numerator / d.denominator)
    return math.log(x.numerator) - math.log(x.denominator)


def to_float(x) -> float:
    """Float of a rational, via logs when the parts are too large for a direct division."""
    x = as_fraction(x)
    try:
        return x.numerator / x.denominator
    except OverflowError:
        if x == 0:
            return 0.0
        return math.copysign(math.exp(log_fraction(abs(x))), x)
