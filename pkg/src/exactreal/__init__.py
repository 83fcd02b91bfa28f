"""Exact real arithmetic from interval decision procedures.

A real number is represented by a locator: a total procedure that, for
any rationals q < r, commits to one of "q < x" or "x < r".  Everything
else is extracted from that single interface with exact rational
bookkeeping: brackets of any width, signed-digit expansions, Cauchy
limits under explicit moduli, field and lattice operations, elementary
functions, Riemann integration, and root finding.  The expr module and
the command line drive the same constructions from textual expressions.
"""

from exactreal.analysis import (
    Grid,
    NonzeroWitness,
    approx_ivt,
    exact_ivt,
    integrate,
    nonconstant_search,
)
from exactreal.arith import (
    ApartnessWitness,
    RealMap,
    Sign,
    absolute,
    add,
    arctan_rational,
    cos,
    e,
    exp,
    find_apartness,
    lift,
    limit,
    maximum,
    minimum,
    mul,
    neg,
    pi,
    recip,
    scalar_mul,
    sin,
    sub,
)
from exactreal.core import (
    Bracket,
    CotransResult,
    CReal,
    SearchExhausted,
    Side,
    archimedean_midpoint,
    bounded_search,
    cotrans_rational,
    evaluation_count,
    from_rational,
    from_rational_first,
    from_rational_second,
    get_search_cap,
    integer_bracket,
    lower_bound,
    refine_lower,
    refine_upper,
    set_search_cap,
    set_trace_hook,
    tight_bound,
    to_cauchy,
    upper_bound,
)
from exactreal.digits import (
    SignedDigitRep,
    from_signed_digits,
    prefix_value,
    render_digits,
    to_signed_digits,
)
from exactreal.expr import (
    Binary,
    Const,
    Expr,
    FreeVariable,
    Lit,
    ParseError,
    Unary,
    Var,
    as_real_map,
    eval_exact,
    evaluate,
    integrand_map,
    parse,
    to_text,
)
from exactreal.rational import (
    Ordering,
    Rational,
    RationalLike,
    as_rational,
    format_rational,
    parse_rational,
    trichotomy,
)

__all__ = [
    "ApartnessWitness",
    "Binary",
    "Bracket",
    "CReal",
    "Const",
    "CotransResult",
    "Expr",
    "FreeVariable",
    "Grid",
    "Lit",
    "NonzeroWitness",
    "Ordering",
    "ParseError",
    "Rational",
    "RationalLike",
    "RealMap",
    "SearchExhausted",
    "Side",
    "Sign",
    "SignedDigitRep",
    "Unary",
    "Var",
    "absolute",
    "add",
    "approx_ivt",
    "archimedean_midpoint",
    "arctan_rational",
    "as_rational",
    "as_real_map",
    "bounded_search",
    "cos",
    "cotrans_rational",
    "e",
    "eval_exact",
    "evaluate",
    "evaluation_count",
    "exact_ivt",
    "exp",
    "find_apartness",
    "format_rational",
    "from_rational",
    "from_rational_first",
    "from_rational_second",
    "from_signed_digits",
    "get_search_cap",
    "integer_bracket",
    "integrand_map",
    "integrate",
    "lift",
    "limit",
    "lower_bound",
    "maximum",
    "minimum",
    "mul",
    "neg",
    "nonconstant_search",
    "parse",
    "parse_rational",
    "pi",
    "prefix_value",
    "recip",
    "refine_lower",
    "refine_upper",
    "render_digits",
    "scalar_mul",
    "set_search_cap",
    "set_trace_hook",
    "sin",
    "sub",
    "tight_bound",
    "to_cauchy",
    "to_signed_digits",
    "to_text",
    "trichotomy",
    "upper_bound",
]
