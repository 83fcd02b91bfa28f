"""Exact rational arithmetic shared by every search in the library.

Rationals are `fractions.Fraction` values: arbitrary precision, always in
canonical reduced form with a positive denominator, compared exactly.  This
module adds what the rest of the library needs on top of the stdlib type:
an explicit three-way comparison, a fixed bijective enumeration of the
rationals (and of the open unit interval) used by all bounded searches, the
Cantor pairing used by two-dimensional searches, and literal parsing.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def trichotomy(a: RationalLike, b: RationalLike) -> Ordering:
    """Exact three-way comparison of two rationals."""
    a = as_rational(a)
    b = as_rational(b)
    if a < b:
        return Ordering.LESS
    if a == b:
        return Ordering.EQUAL
    return Ordering.GREATER


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or literal string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not a rational: {value!r}")


def require_positive(value: RationalLike, what: str = "value") -> Fraction:
    value = as_rational(value)
    if value <= 0:
        raise ValueError(f"{what} must be positive, got {value}")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse "3", "-7/3", or "3.25" into an exact rational.

    Fraction() already accepts exactly these literal forms; this wrapper
    normalizes the error message and rejects float-ish forms like "1e3".
    """
    text = text.strip()
    if "e" in text.lower():
        raise ValueError(f"bad rational literal: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal: {text!r}") from exc


def format_rational(q: RationalLike) -> str:
    """Render exactly, round-tripping through parse_rational."""
    return str(as_rational(q))


# ---------------------------------------------------------------------------
# Fixed enumeration of the rationals.
#
# Positives come from breadth-first order on the Calkin-Wilf tree, whose
# n-th element is read off the binary digits of n (after the leading 1:
# 0 = left child a/(a+b), 1 = right child (a+b)/b).  The full enumeration
# starts at 0 and interleaves each positive with its negation:
# 0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, ...
# Both directions are closed-form, so index_of is cheap.
# ---------------------------------------------------------------------------


def _calkin_wilf(m: int) -> Fraction:
    a, b = 1, 1
    for bit in bin(m)[3:]:
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


def _calkin_wilf_index(q: Fraction) -> int:
    # Undo whole runs of same-direction steps at once with divmod; the
    # index has one bit per step, so this costs O(len of the answer).
    a, b = q.numerator, q.denominator
    runs = []
    while a != 1 or b != 1:
        if a < b:
            k, rem = divmod(b, a)
            runs.append("0" * (k if rem else k - 1))
            b = rem if rem else 1
        else:
            k, rem = divmod(a, b)
            runs.append("1" * (k if rem else k - 1))
            a = rem if rem else 1
    return int("1" + "".join(reversed(runs)), 2)


def enumerate_rational(n: int) -> Fraction:
    """The n-th rational of the fixed enumeration (n >= 0)."""
    if n < 0:
        raise ValueError("enumeration index must be >= 0")
    if n == 0:
        return Fraction(0)
    if n % 2 == 1:
        return _calkin_wilf((n + 1) // 2)
    return -_calkin_wilf(n // 2)


def index_of(q: RationalLike) -> int:
    """Inverse of enumerate_rational: index_of(enumerate_rational(n)) == n."""
    q = as_rational(q)
    if q == 0:
        return 0
    if q > 0:
        return 2 * _calkin_wilf_index(q) - 1
    return 2 * _calkin_wilf_index(-q)


def unit_rational(i: int) -> Fraction:
    """The i-th element of a fixed enumeration of the open unit interval.

    Image of the positive Calkin-Wilf enumeration under y -> y/(1+y),
    a bijection from the positive rationals onto (0, 1).
    """
    y = _calkin_wilf(i + 1)
    return y / (1 + y)


def cantor_decode(code: int) -> tuple[int, int]:
    """Inverse of the Cantor pairing (i, j) -> (i+j)(i+j+1)/2 + j."""
    if code < 0:
        raise ValueError("pair code must be >= 0")
    d = (math.isqrt(8 * code + 1) - 1) // 2
    j = code - d * (d + 1) // 2
    return d - j, j
