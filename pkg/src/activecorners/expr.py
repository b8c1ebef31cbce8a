"""Closed-form expression trees.

Expressions are immutable binary trees over named variables.  Constants are
kept as exact :class:`fractions.Fraction` values as long as possible; they
degrade to ``float`` once an irrational operation (sqrt of a non-square, pi,
trig of a constant) is involved.  Constant subtrees are folded when a node is
built, so ``parse("2*3 + x")`` yields ``Add(Const(6), Var("x"))``.

There is no simplifier beyond folding.  ``Clamp`` nodes exist so that region
formulas can hold a trajectory function evaluated at a clamped argument.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

Number = Union[Fraction, float]

# sqrt arguments this far below zero are treated as rounding noise
SQRT_SLACK = 1e-12


class ExprError(ValueError):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the real domain of a node (negative sqrt, 0 division)."""

    def __init__(self, message: str, node: "Expr"):
        self.node = node
        super().__init__(f"{message} in {to_str(node)!r}")


# ---------------------------------------------------------------------------
# nodes


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return power(self, n)

    def __str__(self) -> str:
        return to_str(self)


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: Number

    def __eq__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        a, b = self.value, other.value
        if isinstance(a, float) or isinstance(b, float):
            return float(a) == float(b)
        return a == b

    def __hash__(self):
        return hash(float(self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Clamp(Expr):
    """``min(max(arg, lo), hi)``; a missing bound means that side is open."""

    arg: Expr
    lo: Optional[Number] = None
    hi: Optional[Number] = None


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def _num(v) -> Number:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a number")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, Real):
        return float(v)
    raise TypeError(f"not a real number: {v!r}")


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(_num(v))


def const(v) -> Const:
    return Const(_num(v))


# ---------------------------------------------------------------------------
# smart constructors (constant folding)


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_value(v: Number) -> Number:
    if isinstance(v, Fraction):
        r = _exact_sqrt(v)
        if r is not None:
            return r
    return math.sqrt(v)


def _pow_value(b: Number, n: int) -> Number:
    if isinstance(b, Fraction):
        return b**n
    return float(b) ** n


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def power(a: Expr, n: int) -> Expr:
    if not isinstance(n, int) or isinstance(n, bool):
        raise ExprError(f"exponent must be an integer, got {n!r}")
    if isinstance(a, Const) and not (a.value == 0 and n < 0):
        return Const(_pow_value(a.value, n))
    return Pow(a, n)


def sqrt(a: Expr) -> Expr:
    if isinstance(a, Const) and a.value >= 0:
        return Const(_sqrt_value(a.value))
    return Sqrt(a)


def clamp(a: Expr, lo: Optional[Number] = None, hi: Optional[Number] = None) -> Expr:
    lo = None if lo is None or lo == -math.inf else _num(lo)
    hi = None if hi is None or hi == math.inf else _num(hi)
    if lo is not None and hi is not None and lo > hi:
        raise ExprError(f"clamp bounds out of order: {lo} > {hi}")
    if isinstance(a, Const):
        v = a.value
        if lo is not None and v < lo:
            v = lo
        if hi is not None and v > hi:
            v = hi
        return Const(v)
    return Clamp(a, lo, hi)


def fold(e: Expr) -> Expr:
    """Rebuild ``e`` through the smart constructors (idempotent)."""
    return _map(e, lambda node: node)


def _map(e: Expr, leaf: Callable[[Expr], Expr]) -> Expr:
    if isinstance(e, (Const, Var)):
        return leaf(e)
    if isinstance(e, Add):
        return add(_map(e.left, leaf), _map(e.right, leaf))
    if isinstance(e, Sub):
        return sub(_map(e.left, leaf), _map(e.right, leaf))
    if isinstance(e, Mul):
        return mul(_map(e.left, leaf), _map(e.right, leaf))
    if isinstance(e, Div):
        return div(_map(e.left, leaf), _map(e.right, leaf))
    if isinstance(e, Neg):
        return neg(_map(e.arg, leaf))
    if isinstance(e, Pow):
        return power(_map(e.base, leaf), e.exp)
    if isinstance(e, Sqrt):
        return sqrt(_map(e.arg, leaf))
    if isinstance(e, Clamp):
        return clamp(_map(e.arg, leaf), e.lo, e.hi)
    raise TypeError(f"unknown node {e!r}")


def substitute(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    """Replace variables by expressions, folding as the tree is rebuilt."""
    return _map(e, lambda v: bindings.get(v.name, v) if isinstance(v, Var) else v)


def rename(e: Expr, names: Mapping[str, str]) -> Expr:
    return substitute(e, {old: Var(new) for old, new in names.items()})


def children(e: Expr) -> tuple:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (Sqrt, Clamp)):
        return (e.arg,)
    return ()


def walk(e: Expr):
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def free_vars(e: Expr) -> frozenset:
    return frozenset(n.name for n in walk(e) if isinstance(n, Var))


def is_rational(e: Expr) -> bool:
    """True when evaluation at a rational point stays in exact arithmetic."""
    for n in walk(e):
        if isinstance(n, Sqrt):
            return False
        if isinstance(n, Const) and not isinstance(n.value, Fraction):
            return False
        if isinstance(n, Clamp) and any(isinstance(b, float) for b in (n.lo, n.hi)):
            return False
    return True


def size(e: Expr) -> int:
    return sum(1 for _ in walk(e))


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Expr, env: Union[Number, int, Mapping[str, Number]], var: str = "x") -> Number:
    """Evaluate at a point.

    ``env`` is either a mapping of variable names or a single value bound to
    ``var``.  Fraction inputs keep exact arithmetic while the tree allows it.
    """
    if not isinstance(env, Mapping):
        env = {var: env}
    env = {k: _num(v) for k, v in env.items()}
    return _eval(e, env)


def _eval(e: Expr, env) -> Number:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExprError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Add):
        return _eval(e.left, env) + _eval(e.right, env)
    if isinstance(e, Sub):
        return _eval(e.left, env) - _eval(e.right, env)
    if isinstance(e, Mul):
        return _eval(e.left, env) * _eval(e.right, env)
    if isinstance(e, Div):
        d = _eval(e.right, env)
        if d == 0:
            raise DomainError("division by zero", e)
        return _eval(e.left, env) / d
    if isinstance(e, Neg):
        return -_eval(e.arg, env)
    if isinstance(e, Pow):
        b = _eval(e.base, env)
        if b == 0 and e.exp < 0:
            raise DomainError("zero to a negative power", e)
        return _pow_value(b, e.exp)
    if isinstance(e, Sqrt):
        a = _eval(e.arg, env)
        if a < 0:
            if a < -SQRT_SLACK * (1 + _scale(e.arg, env)):
                raise DomainError(f"sqrt of negative value {float(a):.6g}", e)
            return Fraction(0)
        return _sqrt_value(a)
    if isinstance(e, Clamp):
        a = _eval(e.arg, env)
        if e.lo is not None and a < e.lo:
            return e.lo
        if e.hi is not None and a > e.hi:
            return e.hi
        return a
    raise TypeError(f"unknown node {e!r}")


def _scale(e: Expr, env) -> float:
    # magnitude of the largest constant or variable value feeding e
    m = 0.0
    for n in walk(e):
        if isinstance(n, Const):
            m = max(m, abs(float(n.value)))
        elif isinstance(n, Var) and n.name in env:
            m = max(m, abs(float(env[n.name])))
    return m * m


def evaluate_array(e: Expr, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorised float evaluation; domain violations raise like :func:`evaluate`."""
    arrays = {k: np.asarray(v, dtype=float) for k, v in env.items()}
    shape = np.broadcast_shapes(*(a.shape for a in arrays.values())) if arrays else ()
    out = np.asarray(_eval_np(e, arrays), dtype=float)
    return np.broadcast_to(out, shape).copy()


def _eval_np(e: Expr, env):
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExprError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Add):
        return _eval_np(e.left, env) + _eval_np(e.right, env)
    if isinstance(e, Sub):
        return _eval_np(e.left, env) - _eval_np(e.right, env)
    if isinstance(e, Mul):
        return _eval_np(e.left, env) * _eval_np(e.right, env)
    if isinstance(e, Div):
        d = _eval_np(e.right, env)
        if np.any(d == 0):
            raise DomainError("division by zero", e)
        return _eval_np(e.left, env) / d
    if isinstance(e, Neg):
        return -_eval_np(e.arg, env)
    if isinstance(e, Pow):
        b = _eval_np(e.base, env)
        if e.exp < 0 and np.any(b == 0):
            raise DomainError("zero to a negative power", e)
        return np.power(b, float(e.exp)) if e.exp < 0 else b**e.exp
    if isinstance(e, Sqrt):
        a = _eval_np(e.arg, env)
        if np.any(a < 0):
            tol = SQRT_SLACK * (1 + _scale_np(e.arg, env))
            if np.any(a < -tol):
                worst = float(np.min(a))
                raise DomainError(f"sqrt of negative value {worst:.6g}", e)
            a = np.maximum(a, 0.0)
        return np.sqrt(a)
    if isinstance(e, Clamp):
        a = _eval_np(e.arg, env)
        lo = -np.inf if e.lo is None else float(e.lo)
        hi = np.inf if e.hi is None else float(e.hi)
        return np.clip(a, lo, hi)
    raise TypeError(f"unknown node {e!r}")


def _scale_np(e: Expr, env) -> float:
    m = 0.0
    for n in walk(e):
        if isinstance(n, Const):
            m = max(m, abs(float(n.value)))
        elif isinstance(n, Var) and n.name in env:
            v = env[n.name]
            if np.size(v):
                m = max(m, float(np.max(np.abs(v))))
    return m * m


# ---------------------------------------------------------------------------
# differentiation


def _d_add(a: Expr, b: Expr) -> Expr:
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return add(a, b)


def _d_sub(a: Expr, b: Expr) -> Expr:
    if b == ZERO:
        return a
    if a == ZERO:
        return neg(b)
    return sub(a, b)


def _d_mul(a: Expr, b: Expr) -> Expr:
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return mul(a, b)


def differentiate(e: Expr, var: str = "x") -> Expr:
    """Exact symbolic derivative with respect to ``var``."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Add):
        return _d_add(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Sub):
        return _d_sub(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Mul):
        da, db = differentiate(e.left, var), differentiate(e.right, var)
        return _d_add(_d_mul(da, e.right), _d_mul(e.left, db))
    if isinstance(e, Div):
        da, db = differentiate(e.left, var), differentiate(e.right, var)
        if db == ZERO:
            return ZERO if da == ZERO else div(da, e.right)
        num = _d_sub(_d_mul(da, e.right), _d_mul(e.left, db))
        return div(num, power(e.right, 2))
    if isinstance(e, Neg):
        d = differentiate(e.arg, var)
        return ZERO if d == ZERO else neg(d)
    if isinstance(e, Pow):
        d = differentiate(e.base, var)
        if d == ZERO or e.exp == 0:
            return ZERO
        outer = const(e.exp) if e.exp == 1 else _d_mul(const(e.exp), power(e.base, e.exp - 1))
        return _d_mul(outer, d)
    if isinstance(e, Sqrt):
        d = differentiate(e.arg, var)
        if d == ZERO:
            return ZERO
        return div(d, mul(const(2), e))
    if isinstance(e, Clamp):
        raise ExprError("clamp() has no derivative; differentiate before clamping")
    raise TypeError(f"unknown node {e!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)

_CONST_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "abs": abs,
}


def _literal(text: str, exact: bool = True) -> Number:
    if not exact and "." in text:
        return float(text)
    if "e" in text or "E" in text:
        return float(text)
    return Fraction(text)


def _snap_rational(v: float) -> Number:
    """cos(pi/3) and friends land a few ulps off a simple fraction; return that fraction."""
    if not math.isfinite(v):
        return v
    q = Fraction(v).limit_denominator(64)
    if abs(float(q) - v) <= 4 * math.ulp(max(abs(v), 1.0)):
        return q
    return v


class _Parser:
    def __init__(self, text: str, variables, constants, allow_clamp, exact=True):
        self.exact = exact
        self.text = text
        self.variables = set(variables)
        self.constants = dict(constants or {})
        self.allow_clamp = allow_clamp
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text):
        out = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos, text)
            kind = m.lastgroup
            start = m.start(kind)
            val = m.group(kind)
            if val == "**":
                val = "^"
            out.append((kind, val, start))
            pos = m.end()
        out.append(("end", "", len(text)))
        return out

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val:
            got = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {val!r}, got {got}", pos, self.text)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos, self.text)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expr:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return neg(self.unary())
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.base()
        kind, v, pos = self.peek()
        if kind == "op" and v == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, v, pos = self.take()
            if kind != "num" or not v.isdigit():
                raise ParseError("exponent must be an integer literal", pos, self.text)
            return power(base, sign * int(v))
        return base

    def base(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Const(_literal(v, self.exact))
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if self.peek()[1] == "(":
                return self.call(v, pos)
            if v in self.variables:
                return Var(v)
            if v in self.constants:
                return as_expr(self.constants[v])
            if v == "pi":
                return Const(math.pi)
            if v == "inf":
                return Const(math.inf)
            raise ParseError(f"unknown identifier {v!r}", pos, self.text)
        got = "end of input" if kind == "end" else repr(v)
        raise ParseError(f"unexpected {got}", pos, self.text)

    def call(self, name, pos) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.expr())
        self.expect(")")
        if name == "sqrt":
            self._arity(name, args, 1, pos)
            return sqrt(args[0])
        if name in _CONST_FUNCS:
            self._arity(name, args, 1, pos)
            a = args[0]
            if not isinstance(a, Const):
                raise ParseError(f"{name}() takes a constant argument only", pos, self.text)
            if name == "abs":
                return Const(abs(a.value))
            return Const(_snap_rational(_CONST_FUNCS[name](float(a.value))))
        if name == "clamp" and self.allow_clamp:
            self._arity(name, args, 3, pos)
            bounds = []
            for b in args[1:]:
                if not isinstance(b, Const):
                    raise ParseError("clamp() bounds must be constants", pos, self.text)
                bounds.append(b.value)
            return clamp(args[0], *bounds)
        raise ParseError(f"unknown function {name!r}", pos, self.text)

    def _arity(self, name, args, n, pos):
        if len(args) != n:
            raise ParseError(f"{name}() takes {n} argument(s), got {len(args)}", pos, self.text)


def parse(
    text: str,
    variables: Sequence[str] = ("x",),
    constants: Optional[Mapping[str, Number]] = None,
    allow_clamp: bool = False,
    exact_decimals: bool = True,
) -> Expr:
    """Parse an infix expression.

    ``variables`` lists the formal variable names; ``constants`` maps extra
    identifiers to numbers (instance parameters such as ``R`` or ``theta``).
    Decimal literals are exact fractions unless ``exact_decimals`` is false,
    in which case ``1.5`` reads back as the float that printed it.
    """
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text, variables, constants, allow_clamp, exact_decimals).parse()


def parse_number(text, constants: Optional[Mapping[str, Number]] = None) -> Number:
    """Parse a constant: ``3``, ``"p/q"``, ``"5*sqrt(3)"``, ``"inf"``."""
    if isinstance(text, (int, float, Fraction)) and not isinstance(text, bool):
        return _num(text)
    e = parse(str(text), variables=(), constants=constants)
    if not isinstance(e, Const):
        raise ExprError(f"not a constant: {text!r}")
    return e.value


# ---------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_number(v: Number) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def _const_prec(v: Number) -> int:
    if isinstance(v, Fraction) and v.denominator != 1:
        return _PREC_MUL
    if v < 0:
        return _PREC_NEG
    return _PREC_ATOM


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const):
        return _const_prec(e.value)
    return _PREC_ATOM


def to_str(e: Expr) -> str:
    """Print in the input grammar; ``parse(to_str(e)) == e``."""

    def wrap(child, need_left, need_right=None, right=False):
        p = _prec(child)
        need = need_right if right else need_left
        s = to_str(child)
        return f"({s})" if p < need else s

    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        rhs = wrap(e.right, _PREC_ADD, _PREC_ADD + 1, True)
        if rhs.startswith("-"):
            rhs = f"({rhs})"
        return f"{wrap(e.left, _PREC_ADD)} {op} {rhs}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{wrap(e.left, _PREC_MUL)} {op} {wrap(e.right, _PREC_MUL, _PREC_MUL + 1, True)}"
    if isinstance(e, Neg):
        return f"-{wrap(e.arg, _PREC_NEG)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, _PREC_ATOM)}^{e.exp}"
    if isinstance(e, Sqrt):
        return f"sqrt({to_str(e.arg)})"
    if isinstance(e, Clamp):
        lo = "-inf" if e.lo is None else _fmt_number(e.lo)
        hi = "inf" if e.hi is None else _fmt_number(e.hi)
        return f"clamp({to_str(e.arg)}, {lo}, {hi})"
    raise TypeError(f"unknown node {e!r}")
