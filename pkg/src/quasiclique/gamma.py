"""Exact rational density thresholds."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

GammaLike = Union[Fraction, int, str, float, tuple]


def as_gamma(value: GammaLike) -> Fraction:
    """Coerce to a Fraction in [0, 1].

    Strings may be ``"7/10"`` or ``"0.7"``; floats go through their shortest
    repr, so ``0.7`` becomes ``7/10`` rather than the binary expansion.
    """
    if isinstance(value, tuple):
        num, den = value
        g = Fraction(int(num), int(den))
    elif isinstance(value, (Rational, str)):
        g = Fraction(value)
    elif isinstance(value, float):
        g = Fraction(repr(value))
    else:
        raise TypeError(f"cannot interpret {value!r} as a density threshold")
    if not 0 <= g <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {g}")
    return g


def required_edges(r: int, gamma: GammaLike) -> int:
    """Least edge count that makes an r-vertex set gamma-dense: ceil(gamma * C(r, 2))."""
    if r < 0:
        raise ValueError("r must be non-negative")
    g = as_gamma(gamma)
    return -((-g.numerator * r * (r - 1)) // (2 * g.denominator))


def is_dense(edges: int, size: int, gamma: GammaLike) -> bool:
    """Integer density certificate: 2 * den * edges >= num * size * (size - 1)."""
    g = as_gamma(gamma)
    return 2 * g.denominator * edges >= g.numerator * size * (size - 1)
