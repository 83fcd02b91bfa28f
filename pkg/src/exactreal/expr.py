"""Expression trees over exact reals: parsing, printing, evaluation.

The grammar covers integer literals, the constants pi and e, the bound
variable x, unary minus, the operators + - * /, and the functions exp,
sin, cos, abs, recip, min, max in call syntax.  Precedence is unary minus,
then * and /, then + and -.  Division desugars to multiplication by a
reciprocal, so evaluating it searches for an apartness witness for the
denominator.

For integration the module also derives what the analysis layer needs
from the tree itself: a uniform continuity modulus from Lipschitz bounds
over the integration interval, and a fast whole-grid sum enclosure when
the integrand is a rational combination of polynomials and exp, sin, cos
of affine arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from exactreal import arith
from exactreal.analysis import Grid
from exactreal.arith import RealMap
from exactreal.core import CReal, from_rational
from exactreal.enclosures import (
    Window,
    exp_grid_sum,
    exp_window,
    poly_grid_sum,
    sin_exp_grid_sum,
    trig_grid_sum,
)
from exactreal.rational import Rational, RationalLike, as_rational

_UNARY_OPS = ("neg", "abs", "exp", "sin", "cos", "recip")
_BINARY_OPS = ("add", "sub", "mul", "div", "min", "max")


@dataclass(frozen=True)
class Lit:
    value: Rational


@dataclass(frozen=True)
class Const:
    name: str

    def __post_init__(self) -> None:
        if self.name not in ("pi", "e"):
            raise ValueError(f"unknown constant {self.name!r}")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"

    def __post_init__(self) -> None:
        if self.op not in _UNARY_OPS:
            raise ValueError(f"unknown unary operation {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self) -> None:
        if self.op not in _BINARY_OPS:
            raise ValueError(f"unknown binary operation {self.op!r}")


Expr = Union[Lit, Const, Var, Unary, Binary]


class ParseError(ValueError):
    """Bad expression text; position is a character offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at offset {position}")
        self.position = position


class FreeVariable(ValueError):
    """The expression mentions x but no binding was supplied."""


# ---------------------------------------------------------------------------
# Parsing.
# ---------------------------------------------------------------------------

_FUNCTIONS = {"exp": 1, "sin": 1, "cos": 1, "abs": 1, "recip": 1, "min": 2, "max": 2}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(_Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/(),":
            out.append(_Token("sym", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.at = 0

    def peek(self) -> _Token:
        return self.tokens[self.at]

    def take(self) -> _Token:
        token = self.tokens[self.at]
        self.at += 1
        return token

    def expect(self, sym: str) -> None:
        token = self.take()
        if token.kind != "sym" or token.text != sym:
            raise ParseError(f"expected {sym!r}", token.pos)

    def expression(self) -> Expr:
        node = self.term()
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.take().text
            node = Binary("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind == "sym" and self.peek().text in "*/":
            op = self.take().text
            node = Binary("mul" if op == "*" else "div", node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek().kind == "sym" and self.peek().text == "-":
            self.take()
            return Unary("neg", self.factor())
        return self.atom()

    def atom(self) -> Expr:
        token = self.take()
        if token.kind == "int":
            return Lit(Fraction(int(token.text)))
        if token.kind == "name":
            if token.text in _FUNCTIONS:
                self.expect("(")
                args = [self.expression()]
                for _ in range(_FUNCTIONS[token.text] - 1):
                    self.expect(",")
                    args.append(self.expression())
                self.expect(")")
                if len(args) == 1:
                    return Unary(token.text, args[0])
                return Binary(token.text, args[0], args[1])
            if token.text in ("pi", "e"):
                return Const(token.text)
            if token.text == "x":
                return Var()
            raise ParseError(f"unknown name {token.text!r}", token.pos)
        if token.kind == "sym" and token.text == "(":
            node = self.expression()
            self.expect(")")
            return node
        if token.kind == "end":
            raise ParseError("unexpected end of input", token.pos)
        raise ParseError(f"unexpected {token.text!r}", token.pos)


def parse(text: str) -> Expr:
    """Parse expression text; raises ParseError with a character offset."""
    parser = _Parser(text)
    node = parser.expression()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected {trailing.text!r}", trailing.pos)
    return node


# ---------------------------------------------------------------------------
# Printing.  Reparsing the output always reproduces the same text, which
# is what the golden tests pin down.
# ---------------------------------------------------------------------------

_LEVEL = {"add": 1, "sub": 1, "mul": 2, "div": 2}
_SYMBOL = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}


def to_text(expr: Expr) -> str:
    return _render(expr, 0)


def _render(e: Expr, context: int) -> str:
    if isinstance(e, Lit):
        return str(e.value)
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"-{_render(e.arg, 3)}"
        return f"{e.op}({_render(e.arg, 0)})"
    if e.op in ("min", "max"):
        return f"{e.op}({_render(e.left, 0)}, {_render(e.right, 0)})"
    level = _LEVEL[e.op]
    text = f"{_render(e.left, level)}{_SYMBOL[e.op]}{_render(e.right, level + 1)}"
    return f"({text})" if level < context else text


# ---------------------------------------------------------------------------
# Evaluation.
# ---------------------------------------------------------------------------


def evaluate(expr: Expr, x: Optional[CReal] = None) -> CReal:
    """The locator an expression denotes; x binds the variable.

    Structurally equal subexpressions map to one locator, so their query
    memos are shared across the whole tree.
    """
    memo: dict[Expr, CReal] = {}

    def go(e: Expr) -> CReal:
        got = memo.get(e)
        if got is None:
            got = _build(e, go, x)
            memo[e] = got
        return got

    return go(expr)


def _build(e: Expr, go: Callable[[Expr], CReal], x: Optional[CReal]) -> CReal:
    if isinstance(e, Lit):
        return from_rational(e.value)
    if isinstance(e, Const):
        return arith.pi() if e.name == "pi" else arith.e()
    if isinstance(e, Var):
        if x is None:
            raise FreeVariable("expression has a free variable x")
        return x
    if isinstance(e, Unary):
        arg = go(e.arg)
        if e.op == "neg":
            return arith.neg(arg)
        if e.op == "abs":
            return arith.absolute(arg)
        if e.op == "exp":
            return arith.exp(arg)
        if e.op == "sin":
            return arith.sin(arg)
        if e.op == "cos":
            return arith.cos(arg)
        return arith.recip(arg, arith.find_apartness(arg))
    left, right = go(e.left), go(e.right)
    if e.op == "add":
        return arith.add(left, right)
    if e.op == "sub":
        return arith.sub(left, right)
    if e.op == "mul":
        return arith.mul(left, right)
    if e.op == "div":
        return arith.mul(left, arith.recip(right, arith.find_apartness(right)))
    if e.op == "min":
        return arith.minimum(left, right)
    return arith.maximum(left, right)


def eval_exact(expr: Expr, x: Optional[RationalLike] = None) -> Rational:
    """Exact rational value when the expression stays rational.

    Raises ValueError on pi, e, exp, sin, cos and on an unbound variable;
    division by zero raises like rational division does.  The test suite
    uses this as the oracle against evaluate.
    """
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Const):
        raise ValueError(f"{expr.name} is not rational")
    if isinstance(expr, Var):
        if x is None:
            raise FreeVariable("expression has a free variable x")
        return as_rational(x)
    if isinstance(expr, Unary):
        v = eval_exact(expr.arg, x)
        if expr.op == "neg":
            return -v
        if expr.op == "abs":
            return abs(v)
        if expr.op == "recip":
            return 1 / v
        raise ValueError(f"{expr.op} is not rational")
    a, b = eval_exact(expr.left, x), eval_exact(expr.right, x)
    if expr.op == "add":
        return a + b
    if expr.op == "sub":
        return a - b
    if expr.op == "mul":
        return a * b
    if expr.op == "div":
        return a / b
    if expr.op == "min":
        return min(a, b)
    return max(a, b)


# ---------------------------------------------------------------------------
# Integration support: polynomial shape, range and Lipschitz bounds, and
# whole-grid sum enclosures, all read off the tree.
# ---------------------------------------------------------------------------

# Crude rational brackets for the constants; range analysis only needs
# them to be correct, not sharp.
_CONST_RANGE = {
    "pi": (Fraction(3141, 1000), Fraction(3142, 1000)),
    "e": (Fraction(2718, 1000), Fraction(2719, 1000)),
}

Box = tuple[Rational, Rational]


def _trim(p: list[Fraction]) -> list[Fraction]:
    out = list(p)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_add(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _as_poly(e: Expr) -> Optional[list[Fraction]]:
    """Ascending coefficients when e is a rational polynomial in x."""
    if isinstance(e, Lit):
        return [Fraction(e.value)]
    if isinstance(e, Var):
        return [Fraction(0), Fraction(1)]
    if isinstance(e, Unary) and e.op == "neg":
        p = _as_poly(e.arg)
        return None if p is None else [-c for c in p]
    if isinstance(e, Binary):
        if e.op in ("add", "sub"):
            p, q = _as_poly(e.left), _as_poly(e.right)
            if p is None or q is None:
                return None
            if e.op == "sub":
                q = [-c for c in q]
            return _trim(_poly_add(p, q))
        if e.op == "mul":
            p, q = _as_poly(e.left), _as_poly(e.right)
            if p is None or q is None:
                return None
            out = [Fraction(0)] * (len(p) + len(q) - 1)
            for i, a in enumerate(p):
                for j, b in enumerate(q):
                    out[i + j] += a * b
            return _trim(out)
        if e.op == "div":
            p, q = _as_poly(e.left), _as_poly(e.right)
            if p is None or q is None or len(_trim(q)) != 1 or q[0] == 0:
                return None
            return [c / q[0] for c in p]
    return None


def _affine(e: Expr) -> Optional[tuple[Fraction, Fraction]]:
    p = _as_poly(e)
    if p is None or len(p) > 2:
        return None
    return p[0], p[1] if len(p) > 1 else Fraction(0)


def _chain_form(e: Expr) -> Optional[tuple]:
    if isinstance(e, Unary) and e.op in ("exp", "sin", "cos"):
        aff = _affine(e.arg)
        if aff is not None:
            return (e.op, aff[0], aff[1])
        if e.op == "sin":
            drift = _affine_plus_exp(e.arg)
            if drift is not None:
                return ("sinexp", *drift)
    return None


def _affine_plus_exp(e: Expr) -> Optional[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Match e as (p0 + p1*x) + exp(q0 + q1*x), however the sum nests."""
    poly = [Fraction(0), Fraction(0)]
    exps: list[tuple[Fraction, Fraction]] = []

    def walk(node: Expr, sign: int) -> bool:
        if isinstance(node, Binary) and node.op in ("add", "sub"):
            flip = sign if node.op == "add" else -sign
            return walk(node.left, sign) and walk(node.right, flip)
        if isinstance(node, Unary) and node.op == "neg":
            return walk(node.arg, -sign)
        aff = _affine(node)
        if aff is not None:
            poly[0] += sign * aff[0]
            poly[1] += sign * aff[1]
            return True
        if isinstance(node, Unary) and node.op == "exp" and sign == 1:
            inner = _affine(node.arg)
            if inner is not None:
                exps.append(inner)
                return True
        return False

    if walk(e, 1) and len(exps) == 1:
        return (poly[0], poly[1], exps[0][0], exps[0][1])
    return None


def _range(e: Expr, box: Box) -> Optional[Box]:
    """Interval bounds for e(x) as x runs over box; None when unknown."""
    if isinstance(e, Lit):
        return e.value, e.value
    if isinstance(e, Const):
        return _CONST_RANGE[e.name]
    if isinstance(e, Var):
        return box
    if isinstance(e, Unary):
        r = _range(e.arg, box)
        if r is None:
            return None
        lo, hi = r
        if e.op == "neg":
            return -hi, -lo
        if e.op == "abs":
            if lo >= 0:
                return lo, hi
            if hi <= 0:
                return -hi, -lo
            return Fraction(0), max(-lo, hi)
        if e.op == "exp":
            return exp_window(lo, Fraction(1))[0], exp_window(hi, Fraction(1))[1]
        if e.op in ("sin", "cos"):
            return Fraction(-1), Fraction(1)
        if lo > 0 or hi < 0:
            return min(1 / lo, 1 / hi), max(1 / lo, 1 / hi)
        return None
    left, right = _range(e.left, box), _range(e.right, box)
    if left is None or right is None:
        return None
    al, ah = left
    bl, bh = right
    if e.op == "add":
        return al + bl, ah + bh
    if e.op == "sub":
        return al - bh, ah - bl
    if e.op == "mul":
        corners = (al * bl, al * bh, ah * bl, ah * bh)
        return min(corners), max(corners)
    if e.op == "div":
        if bl > 0 or bh < 0:
            corners = (al / bl, al / bh, ah / bl, ah / bh)
            return min(corners), max(corners)
        return None
    if e.op == "min":
        return min(al, bl), min(ah, bh)
    return max(al, bl), max(ah, bh)


def _grow(r: Box) -> Rational:
    return max(abs(r[0]), abs(r[1]))


def _lipschitz(e: Expr, box: Box) -> Optional[Rational]:
    """A Lipschitz constant for e over the box, or None when unknown.

    Slopes of exp and recip depend on where the argument lives, so range
    bounds feed the recursion: exp is its own derivative and 1/x has
    slope 1/x^2 away from zero.
    """
    if isinstance(e, (Lit, Const)):
        return Fraction(0)
    if isinstance(e, Var):
        return Fraction(1)
    if isinstance(e, Unary):
        inner = _lipschitz(e.arg, box)
        if inner is None:
            return None
        if e.op in ("neg", "abs", "sin", "cos"):
            return inner
        r = _range(e.arg, box)
        if r is None:
            return None
        if e.op == "exp":
            return exp_window(r[1], Fraction(1))[1] * inner
        if r[0] > 0 or r[1] < 0:
            gap = min(abs(r[0]), abs(r[1]))
            return inner / (gap * gap)
        return None
    ll, lr = _lipschitz(e.left, box), _lipschitz(e.right, box)
    if ll is None or lr is None:
        return None
    if e.op in ("add", "sub"):
        return ll + lr
    if e.op in ("min", "max"):
        return max(ll, lr)
    rl, rr = _range(e.left, box), _range(e.right, box)
    if rl is None or rr is None:
        return None
    if e.op == "mul":
        return _grow(rl) * lr + _grow(rr) * ll
    if rr[0] > 0 or rr[1] < 0:
        gap = min(abs(rr[0]), abs(rr[1]))
        return ll / gap + _grow(rl) * lr / (gap * gap)
    return None


def _sum_hook(e: Expr) -> Optional[Callable[[Grid, RationalLike], Window]]:
    """A whole-grid sum enclosure for supported integrand shapes.

    Supported: rational-coefficient sums of polynomials, exp, sin, cos of
    affine arguments, and sin of an affine phase with exponential drift.
    Anything else returns None and integration falls back to per-point
    bracketing.
    """
    poly: list[Fraction] = [Fraction(0)]
    chains: list[tuple[Fraction, tuple]] = []

    def absorb(node: Expr, coeff: Fraction) -> bool:
        nonlocal poly
        p = _as_poly(node)
        if p is not None:
            poly = _poly_add(poly, [coeff * c for c in p])
            return True
        if isinstance(node, Binary) and node.op in ("add", "sub"):
            flip = coeff if node.op == "add" else -coeff
            return absorb(node.left, coeff) and absorb(node.right, flip)
        if isinstance(node, Unary) and node.op == "neg":
            return absorb(node.arg, -coeff)
        if isinstance(node, Binary) and node.op == "mul":
            for own, other in ((node.left, node.right), (node.right, node.left)):
                scale = _as_poly(own)
                if scale is not None and len(_trim(scale)) == 1:
                    return absorb(other, coeff * scale[0])
            return False
        if isinstance(node, Binary) and node.op == "div":
            scale = _as_poly(node.right)
            if scale is not None and len(_trim(scale)) == 1 and scale[0] != 0:
                return absorb(node.left, coeff / scale[0])
            return False
        form = _chain_form(node)
        if form is not None:
            chains.append((coeff, form))
            return True
        return False

    if not absorb(e, Fraction(1)):
        return None
    parts = [(c, form) for c, form in chains if c != 0]
    coeffs = _trim(poly)

    def hook(grid: Grid, tol: RationalLike) -> Window:
        budget = as_rational(tol)
        lo, hi = poly_grid_sum(coeffs, grid)
        for c, form in parts:
            share = budget / (len(parts) * abs(c))
            if form[0] == "exp":
                w = exp_grid_sum(form[1], form[2], grid, share)
            elif form[0] in ("sin", "cos"):
                w = trig_grid_sum(form[0], form[1], form[2], grid, share)
            else:
                w = sin_exp_grid_sum(form[1], form[2], form[3], form[4], grid, share)
            lo += min(c * w[0], c * w[1])
            hi += max(c * w[0], c * w[1])
        return lo, hi

    return hook


def integrand_map(e: Expr, lo: RationalLike, hi: RationalLike) -> RealMap:
    """Package an expression in x for integration over [lo, hi].

    The modulus eps -> eps/L comes from the Lipschitz bound over the
    interval; integrands without one (a denominator whose range touches
    zero, say) get modulus None, which integrate rejects.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    box = (min(lo, hi), max(lo, hi))
    slope = _lipschitz(e, box)
    modulus = None
    if slope is not None:
        if slope == 0:
            modulus = lambda eps: Fraction(1)
        else:
            modulus = lambda eps: as_rational(eps) / slope
    return RealMap(
        apply=lambda u: evaluate(e, x=u),
        modulus=modulus,
        sum_enclosure=_sum_hook(e),
        name=to_text(e),
    )


def as_real_map(e: Expr) -> RealMap:
    """Package an expression in x as a bare map, enough for root finding."""
    return RealMap(apply=lambda u: evaluate(e, x=u), name=to_text(e))
