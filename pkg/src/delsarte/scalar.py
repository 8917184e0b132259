"""Exact scalars, binomials and the rate functions.

Exact quantities are plain Python ``int`` / :class:`fractions.Fraction`.
Entropies and rates are evaluated with ``mpmath`` at 128 bits and returned
as floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = [
    "ExactScalar",
    "as_exact",
    "binomial",
    "binary_entropy",
    "jpl1_rate",
    "packing_rate",
    "log2_exact",
    "rate_of",
    "format_exact",
    "parse_exact",
]

ExactScalar = Fraction

_PREC_BITS = 128


def as_exact(x) -> Fraction:
    """Coerce an int / Fraction / "p/q" string to a Fraction.

    Floats are rejected on purpose; use ``Fraction(x)`` explicitly when the
    dyadic value of a float is really what you want.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return parse_exact(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_exact(x) -> str:
    """Serialize a rational as ``"p/q"`` (``"p"`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_exact(s: str) -> Fraction:
    if not isinstance(s, str):
        raise TypeError("rationals are serialized as strings")
    return Fraction(s.strip())


def binomial(n: int, k: int) -> int:
    """C(n, k), with the convention C(n, k) = 0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _check_unit(x, lo, hi, name):
    if not (lo <= x <= hi):
        raise ValueError(f"{name}={x!r} outside [{lo}, {hi}]")


def _entropy_mp(x):
    if x == 0 or x == 1:
        return mpmath.mpf(0)
    return -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)


def binary_entropy(x: float) -> float:
    """Binary entropy H(x) in bits, with H(0) = H(1) = 0."""
    _check_unit(x, 0, 1, "x")
    with mpmath.workprec(_PREC_BITS):
        return float(_entropy_mp(mpmath.mpf(x)))


def jpl1_rate(delta: float) -> float:
    """First linear-programming rate bound H(1/2 - sqrt(delta (1 - delta)))."""
    _check_unit(delta, 0, 0.5, "delta")
    with mpmath.workprec(_PREC_BITS):
        d = mpmath.mpf(delta)
        x = mpmath.mpf(1) / 2 - mpmath.sqrt(d * (1 - d))
        # sqrt rounding can push x a hair below zero at delta = 1/2
        if x < 0:
            x = mpmath.mpf(0)
        return float(_entropy_mp(x))


def packing_rate(delta: float) -> float:
    """Sphere-packing (Hamming) rate bound 1 - H(delta / 2)."""
    _check_unit(delta, 0, 0.5, "delta")
    with mpmath.workprec(_PREC_BITS):
        return float(1 - _entropy_mp(mpmath.mpf(delta) / 2))


def log2_exact(x) -> float:
    """log2 of a positive exact rational; safe for numbers beyond float range."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log2 of a non-positive number")
    return math.log2(x.numerator) - math.log2(x.denominator)


def rate_of(bound, n: int) -> float:
    """Rate log2(bound) / n of a code-size bound."""
    if n <= 0:
        raise ValueError("n must be positive")
    return log2_exact(bound) / n
