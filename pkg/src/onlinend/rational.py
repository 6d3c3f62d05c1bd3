"""Exact rational helpers shared by the engines and the file formats."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]
INF = math.inf


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every cost and time in the package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def fmt(x) -> str:
    """Render a rational as ``"p"`` or ``"p/q"``; infinity as ``"inf"``."""
    if x == INF:
        return "inf"
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(s: str):
    if s == "inf":
        return INF
    return frac(s)


def pow2(k: int) -> Fraction:
    return Fraction(2) ** k


def floor_log2(x) -> int:
    """Exact floor(log2 x) for a positive rational."""
    x = frac(x)
    if x <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    n, d = x.numerator, x.denominator
    k = n.bit_length() - d.bit_length()
    # 2^k <= x < 2^(k+1) after at most one correction step
    if pow2(k) > x:
        k -= 1
    elif pow2(k + 1) <= x:
        k += 1
    return k


def to_float(x):
    if x is None:
        return None
    if x == INF:
        return math.inf
    return float(x)
