"""Arithmetic on locator-represented reals.

Each operation builds the locator for the result out of locator queries on
the operands, so values stay exact and nothing is evaluated until someone
asks the result a question.  Negation, min, max, and rational scaling
transform single queries; addition and multiplication first pin the
operands into brackets just tight enough that one side of the query becomes
certain.  Limits of Cauchy sequences (given a modulus) close the system,
and the power-series functions exp, sin, cos and the constants pi and e
are built as such limits with explicit rational tail bounds.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from exactreal.core import (
    CReal,
    SearchExhausted,
    Side,
    from_rational,
    get_search_cap,
    tight_bound,
    upper_bound,
)
from exactreal.rational import Rational, RationalLike, as_rational, require_positive

# M(eps) = N promises |seq(m) - seq(n)| < eps for all m, n >= N.
CauchyModulus = Callable[[RationalLike], int]


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class ApartnessWitness:
    """Certificate that a real is bounded away from zero.

    POSITIVE asserts x > gap; NEGATIVE asserts x < -gap.
    """

    sign: Sign
    gap: Rational

    def __post_init__(self) -> None:
        require_positive(self.gap, "gap")


@dataclass(frozen=True)
class RealMap:
    """A real function packaged with its lifting action on locators.

    apply must be extensional: operand locators for the same real must
    yield locators for the same image.  modulus, when present, is a uniform
    continuity modulus on the map's intended domain: |x - y| < modulus(eps)
    implies |f(x) - f(y)| < eps; integration requires it.  sum_enclosure,
    when present, takes a finite sequence of rational sample points (it
    supports len, indexing, and iteration; in practice an arithmetic grid)
    and a positive tolerance, and returns exact rationals (lo, hi) with
    lo <= sum f(t_i) <= hi and hi - lo < tolerance; it exists so grid-heavy
    consumers can skip per-point locator queries.
    """

    apply: Callable[[CReal], CReal]
    modulus: Optional[Callable[[RationalLike], Rational]] = None
    sum_enclosure: Optional[Callable[[Sequence, RationalLike], tuple]] = None
    name: str = "map"


def lift(f: RealMap, x: CReal) -> CReal:
    return f.apply(x)


def _flip(side: Side) -> Side:
    return Side.LEFT if side is Side.RIGHT else Side.RIGHT


def _clip(label: str, limit: int = 32) -> str:
    # Compound names are trace labels, not identities.  Unclipped, deeply
    # recursive constructions (limits of sequences defined by earlier
    # members) would build names of exponential length.
    if len(label) <= limit:
        return label
    return label[:14] + "..." + label[-14:]


def neg(x: CReal) -> CReal:
    """-x: reflect the query and flip the answer."""

    def decide(q: Rational, r: Rational) -> Side:
        return _flip(x.locate(-r, -q))

    return CReal(decide, name=f"(-{_clip(x.name)})")


def add(x: CReal, y: CReal) -> CReal:
    """x + y.

    Pin x into (u, v) with v - u < eps = (r - q)/2, then ask y about
    (q - u, q - u + eps).  RIGHT there gives x + y > u + (q - u) = q;
    LEFT gives x + y < v + (q - u) + eps < q + 2*eps = r.
    """

    def decide(q: Rational, r: Rational) -> Side:
        eps = (r - q) / 2
        u = tight_bound(x, eps).lo
        s = q - u
        return y.locate(s, s + eps)

    return CReal(decide, name=f"({_clip(x.name)}+{_clip(y.name)})")


def sub(x: CReal, y: CReal) -> CReal:
    return add(x, neg(y))


def minimum(x: CReal, y: CReal) -> CReal:
    """min(x, y): below r as soon as either operand is; above q if both are."""

    def decide(q: Rational, r: Rational) -> Side:
        if x.locate(q, r) is Side.LEFT:
            return Side.LEFT
        return y.locate(q, r)

    return CReal(decide, name=f"min({_clip(x.name)},{_clip(y.name)})")


def maximum(x: CReal, y: CReal) -> CReal:
    def decide(q: Rational, r: Rational) -> Side:
        if x.locate(q, r) is Side.RIGHT:
            return Side.RIGHT
        return y.locate(q, r)

    return CReal(decide, name=f"max({_clip(x.name)},{_clip(y.name)})")


def absolute(x: CReal) -> CReal:
    return maximum(x, neg(x))


def scalar_mul(c: RationalLike, x: CReal) -> CReal:
    """c * x for rational c: the constant folds into the query."""
    c = as_rational(c)
    if c == 0:
        return from_rational(0)
    if c > 0:

        def decide(q: Rational, r: Rational) -> Side:
            return x.locate(q / c, r / c)

    else:

        def decide(q: Rational, r: Rational) -> Side:
            return _flip(x.locate(r / c, q / c))

    return CReal(decide, name=f"({c}*{_clip(x.name)})")


def mul(x: CReal, y: CReal) -> CReal:
    """x * y.

    On the first query, fix rationals z > |x| + 1 and w > |y| + 1.  Per
    query of width eps, bracket x within eta = min(1, eps/2w) and y within
    delta = min(1, eps/2z); every corner product of the two brackets then
    sits within eps of every other, so q < min(corners) or
    max(corners) < r must hold, and the first check decides.
    """
    bound_x = add(absolute(x), from_rational(1))
    bound_y = add(absolute(y), from_rational(1))
    cache: dict = {}
    lock = threading.Lock()

    def magnitude_bounds() -> tuple[Rational, Rational]:
        with lock:
            if "zw" not in cache:
                cache["zw"] = (upper_bound(bound_x), upper_bound(bound_y))
            return cache["zw"]

    def decide(q: Rational, r: Rational) -> Side:
        z, w = magnitude_bounds()
        eps = r - q
        eta = min(Fraction(1), eps / (2 * w))
        delta = min(Fraction(1), eps / (2 * z))
        bx = tight_bound(x, eta)
        by = tight_bound(y, delta)
        corners = (bx.lo * by.lo, bx.lo * by.hi, bx.hi * by.lo, bx.hi * by.hi)
        return Side.RIGHT if q < min(corners) else Side.LEFT

    return CReal(decide, name=f"({_clip(x.name)}*{_clip(y.name)})")


def recip(x: CReal, witness: ApartnessWitness) -> CReal:
    """1/x, given a witness that x is apart from zero.

    For positive x: queries with q <= 0 answer RIGHT outright; otherwise
    0 < 1/r < 1/q, and asking x about (1/r, 1/q) decides, with the answer
    flipped since inversion reverses order.  Negative x mirrors this, the
    double sign change landing on the same flipped query.
    """
    if witness.sign is Sign.POSITIVE:

        def decide(q: Rational, r: Rational) -> Side:
            if q <= 0:
                return Side.RIGHT
            return _flip(x.locate(1 / r, 1 / q))

    else:

        def decide(q: Rational, r: Rational) -> Side:
            if r >= 0:
                return Side.LEFT
            return _flip(x.locate(1 / r, 1 / q))

    return CReal(decide, name=f"recip({_clip(x.name)})")


def find_apartness(x: CReal, cap: Optional[int] = None) -> ApartnessWitness:
    """Search for a certificate that x is apart from 0.

    Tests the forced queries (10^-j, 2*10^-j) and (-2*10^-j, -10^-j) at
    ever finer j; a sound locator must eventually concede a side if x
    really is apart from zero.  Caller asserts x != 0.
    """
    budget = cap if cap is not None else get_search_cap()
    for j in range(budget):
        g = Fraction(1, 10**j)
        if x.locates_right(g, 2 * g):
            return ApartnessWitness(Sign.POSITIVE, g)
        if x.locates_left(-2 * g, -g):
            return ApartnessWitness(Sign.NEGATIVE, g)
    raise SearchExhausted(
        f"no apartness witness for {x.name} within {budget} refinements; is it zero?"
    )


def limit(seq: Callable[[int], CReal], modulus: CauchyModulus, name: str = "limit") -> CReal:
    """The limit of a Cauchy sequence of located reals.

    Per query (q, r): with eps = (r - q)/3, the member at M(eps/2) sits
    within eps of the limit, so its answer about (q + eps, r - eps)
    transfers.  Members are cached so repeated queries land on the same
    CReal and share its memo.
    """
    members: dict[int, CReal] = {}
    lock = threading.Lock()

    def member(n: int) -> CReal:
        with lock:
            m = members.get(n)
            if m is None:
                m = seq(n)
                members[n] = m
            return m

    def decide(q: Rational, r: Rational) -> Side:
        eps = (r - q) / 3
        return member(modulus(eps / 2)).locate(q + eps, r - eps)

    return CReal(decide, name=name)


# ---------------------------------------------------------------------------
# Power series.  Partial sums are chains of add/mul nodes shared across
# queries; moduli come from rational tail bounds: for N >= 2B the terms of
# sum B^k/k! at least halve each step, so the tail from N is < 2 B^N/N!.
# The constants here are validated against brute-force partial sums in the
# test suite before anything downstream trusts them.
# ---------------------------------------------------------------------------


def _series_real(
    first_term: Callable[[], CReal],
    next_term: Callable[[CReal, int], CReal],
    modulus_of_bound: Callable[[Rational, Rational], int],
    bound_of: Callable[[], Rational],
    name: str,
) -> CReal:
    sums: list[CReal] = []
    terms: list[CReal] = []
    cache: dict = {}
    lock = threading.Lock()

    def magnitude() -> Rational:
        # Lazy: bounding the argument costs queries, so wait until needed.
        if "B" not in cache:
            cache["B"] = bound_of()
        return cache["B"]

    def member(n: int) -> CReal:
        with lock:
            if not sums:
                t0 = first_term()
                terms.append(t0)
                sums.append(t0)
            while len(sums) <= n:
                t = next_term(terms[-1], len(terms))
                terms.append(t)
                sums.append(add(sums[-1], t))
            return sums[n]

    def modulus(eps: RationalLike) -> int:
        eps = require_positive(eps, "eps")
        with lock:
            return modulus_of_bound(magnitude(), eps)

    return limit(member, modulus, name=name)


def _exp_tail_index(b: Rational, eps: Rational) -> int:
    # Least N with N >= 2b and 2 b^N/N! < eps; sums differing past N differ
    # by less than the tail 2 b^(N+1)/(N+1)! < eps.
    term = Fraction(1)
    for n in range(get_search_cap()):
        if n >= 2 * b and 2 * term < eps:
            return n
        term = term * b / (n + 1)
    raise SearchExhausted("exp tail bound not reached under cap")


def exp(x: CReal) -> CReal:
    """e^x as the limit of sum x^k/k! partial sums."""
    return _series_real(
        first_term=lambda: from_rational(1),
        next_term=lambda prev, k: scalar_mul(Fraction(1, k), mul(prev, x)),
        modulus_of_bound=_exp_tail_index,
        bound_of=lambda: upper_bound(absolute(x)),
        name=f"exp({_clip(x.name)})",
    )


def _sin_tail_index(b: Rational, eps: Rational) -> int:
    # Partial sums to N leave odd-degree terms from 2N+3 on; dominate by
    # the full factorial tail.
    term = b**3 / 6  # b^(2n+3)/(2n+3)! at n = 0
    for n in range(get_search_cap()):
        if 2 * n + 3 >= 2 * b and 2 * term < eps:
            return n
        term = term * b * b / ((2 * n + 4) * (2 * n + 5))
    raise SearchExhausted("sin tail bound not reached under cap")


def _cos_tail_index(b: Rational, eps: Rational) -> int:
    term = b**2 / 2  # b^(2n+2)/(2n+2)! at n = 0
    for n in range(get_search_cap()):
        if 2 * n + 2 >= 2 * b and 2 * term < eps:
            return n
        term = term * b * b / ((2 * n + 3) * (2 * n + 4))
    raise SearchExhausted("cos tail bound not reached under cap")


def sin(x: CReal) -> CReal:
    """sin x = sum (-1)^k x^(2k+1)/(2k+1)!, terms chained by -x^2 ratios."""
    squared = mul(x, x)
    return _series_real(
        first_term=lambda: x,
        next_term=lambda prev, k: scalar_mul(
            Fraction(-1, (2 * k) * (2 * k + 1)), mul(prev, squared)
        ),
        modulus_of_bound=_sin_tail_index,
        bound_of=lambda: upper_bound(absolute(x)),
        name=f"sin({_clip(x.name)})",
    )


def cos(x: CReal) -> CReal:
    squared = mul(x, x)
    return _series_real(
        first_term=lambda: from_rational(1),
        next_term=lambda prev, k: scalar_mul(
            Fraction(-1, (2 * k - 1) * (2 * k)), mul(prev, squared)
        ),
        modulus_of_bound=_cos_tail_index,
        bound_of=lambda: upper_bound(absolute(x)),
        name=f"cos({_clip(x.name)})",
    )


def arctan_rational(q: RationalLike) -> CReal:
    """arctan q for rational |q| < 1, as rational alternating partial sums.

    Every partial sum is itself rational, so members are rational locators
    and the modulus is the first-omitted-term bound |q|^(2N+3)/(2N+3).
    """
    q = as_rational(q)
    if not abs(q) < 1:
        raise ValueError(f"arctan series needs |q| < 1, got {q}")

    partials: list[Rational] = []

    def partial(n: int) -> CReal:
        while len(partials) <= n:
            k = len(partials)
            term = Fraction((-1) ** k) * q ** (2 * k + 1) / (2 * k + 1)
            partials.append((partials[-1] if partials else 0) + term)
        return from_rational(partials[n])

    def modulus(eps: RationalLike) -> int:
        eps = require_positive(eps, "eps")
        g = abs(q)
        for n in range(get_search_cap()):
            if g ** (2 * n + 3) / (2 * n + 3) < eps:
                return n
        raise SearchExhausted("arctan tail bound not reached under cap")

    return limit(partial, modulus, name=f"arctan({q})")


def pi() -> CReal:
    """16 arctan(1/5) - 4 arctan(1/239).  A fresh locator per call."""
    return sub(
        scalar_mul(16, arctan_rational(Fraction(1, 5))),
        scalar_mul(4, arctan_rational(Fraction(1, 239))),
    )


def e() -> CReal:
    return exp(from_rational(1))
