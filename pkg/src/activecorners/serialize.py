"""Text forms of a region formula: JSON, LaTeX and Mathematica input."""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import expr as ex
from .expr import Add, Clamp, Const, Div, Expr, Mul, Neg, Number, Pow, Sqrt, Sub, Var
from .region import GE, LE, And, Cmp, Node, Or

JSON_FORMAT = "activecorners-region"
JSON_VERSION = 1
VARIABLES = ("x", "y")


class SerializeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# JSON


def to_data(f: Node) -> dict:
    if isinstance(f, Cmp):
        return {"op": "cmp", "cmp": f.op, "lhs": ex.to_str(f.lhs)}
    d = {"op": "or" if isinstance(f, Or) else "and", "terms": [to_data(t) for t in f.terms]}
    if f.kind:
        d["kind"] = f.kind
    if f.label:
        d["label"] = f.label
    return d


def from_data(d) -> Node:
    if not isinstance(d, dict) or "op" not in d:
        raise SerializeError(f"formula node must be an object with 'op', got {d!r}")
    op = d["op"]
    if op == "cmp":
        if d.get("cmp") not in (LE, GE):
            raise SerializeError(f"unknown comparison {d.get('cmp')!r}")
        try:
            lhs = ex.parse(d["lhs"], variables=VARIABLES, allow_clamp=True, exact_decimals=False)
        except (KeyError, ex.ExprError) as e:
            raise SerializeError(f"bad atom {d!r}: {e}") from None
        return Cmp(lhs, d["cmp"])
    if op not in ("and", "or"):
        raise SerializeError(f"unknown op {op!r}")
    terms = tuple(from_data(t) for t in d.get("terms", []))
    cls = And if op == "and" else Or
    return cls(terms, d.get("kind", ""), d.get("label", ""))


def to_json(f: Node, meta: Optional[dict] = None) -> str:
    doc = {"format": JSON_FORMAT, "version": JSON_VERSION, "variables": list(VARIABLES)}
    if meta:
        doc["meta"] = meta
    doc["formula"] = to_data(f)
    return json.dumps(doc, indent=1) + "\n"


def from_json(text: str) -> Node:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializeError(f"not JSON: {e}") from None
    if not isinstance(doc, dict) or doc.get("format") != JSON_FORMAT:
        raise SerializeError(f"not a {JSON_FORMAT} document")
    if doc.get("version") != JSON_VERSION:
        raise SerializeError(f"unsupported version {doc.get('version')!r}")
    return from_data(doc["formula"])


# ---------------------------------------------------------------------------
# LaTeX

_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def _latex_number(v: Number) -> Tuple[str, int]:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator), (_ATOM if v >= 0 else _NEG)
        sign = "-" if v < 0 else ""
        return f"{sign}\\frac{{{abs(v.numerator)}}}{{{v.denominator}}}", (_ATOM if v >= 0 else _NEG)
    if math.isinf(v):
        return ("\\infty" if v > 0 else "-\\infty"), _NEG if v < 0 else _ATOM
    text = f"{float(v):.12g}"
    if "e" in text:
        m, e = text.split("e")
        text = f"{m} \\cdot 10^{{{int(e)}}}"
        return text, _MUL
    return text, (_ATOM if v >= 0 else _NEG)


def _vars_only_in_clamp(e: Expr) -> Optional[Clamp]:
    """The single clamp node holding every variable of e, if there is one."""
    found: List[Clamp] = []

    def visit(n) -> bool:
        if isinstance(n, Clamp):
            if n not in found:
                found.append(n)
            return True
        if isinstance(n, Var):
            return False
        return all(visit(c) for c in ex.children(n))

    if visit(e) and len(found) == 1:
        return found[0]
    return None


def _is(e: Expr, v) -> bool:
    return isinstance(e, Const) and e.value == v


def _add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return ex.add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0):
        return a
    if _is(a, 0):
        return ex.neg(b)
    return ex.sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0) or _is(b, 0):
        return ex.const(0)
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return ex.mul(a, b)


def _replace(e: Expr, target: Expr, by: Expr) -> Expr:
    """Swap every occurrence of ``target`` for ``by``, dropping zero and unit terms."""
    if e == target:
        return by
    if isinstance(e, (Const, Var)):
        return e
    r = lambda n: _replace(n, target, by)  # noqa: E731
    if isinstance(e, Add):
        return _add(r(e.left), r(e.right))
    if isinstance(e, Sub):
        return _sub(r(e.left), r(e.right))
    if isinstance(e, Mul):
        return _mul(r(e.left), r(e.right))
    if isinstance(e, Div):
        return ex.div(r(e.left), r(e.right))
    if isinstance(e, Neg):
        return ex.neg(r(e.arg))
    if isinstance(e, Pow):
        return ex.power(r(e.base), e.exp)
    if isinstance(e, Sqrt):
        return ex.sqrt(r(e.arg))
    if isinstance(e, Clamp):
        return ex.clamp(r(e.arg), e.lo, e.hi)
    raise TypeError(f"unknown node {e!r}")


def _latex_cases(e: Expr, c: Clamp) -> str:
    rows = []
    a = latex_expr(c.arg)
    if c.lo is not None:
        rows.append(f"{latex_expr(_replace(e, c, ex.const(c.lo)))} & \\text{{for}}\\: {a} < {_latex_number(c.lo)[0]}")
    if c.hi is not None:
        rows.append(f"{latex_expr(_replace(e, c, c.arg))} & \\text{{for}}\\: {a} \\leq {_latex_number(c.hi)[0]}")
        rows.append(f"{latex_expr(_replace(e, c, ex.const(c.hi)))} & \\text{{otherwise}}")
    else:
        rows.append(f"{latex_expr(_replace(e, c, c.arg))} & \\text{{otherwise}}")
    return "\\begin{cases} " + " \\\\ ".join(rows) + " \\end{cases}"


def _latex(e: Expr) -> Tuple[str, int]:
    if not isinstance(e, (Const, Var)) and any(isinstance(n, Clamp) for n in ex.walk(e)):
        c = _vars_only_in_clamp(e)
        if c is not None:
            return _latex_cases(e, c), _ATOM

    def wrap(child, level):
        s, p = _latex(child)
        return f"\\left({s}\\right)" if p < level else s

    if isinstance(e, Const):
        return _latex_number(e.value)
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        rhs = wrap(e.right, _ADD + 1)
        if rhs.startswith("-"):
            rhs = f"\\left({rhs}\\right)"
        return f"{wrap(e.left, _ADD)} {op} {rhs}", _ADD
    if isinstance(e, Mul):
        rhs = wrap(e.right, _MUL + 1)
        if rhs.startswith("-"):
            rhs = f"\\left({rhs}\\right)"
        return f"{wrap(e.left, _MUL)} \\cdot {rhs}", _MUL
    if isinstance(e, Div):
        return f"\\frac{{{_latex(e.left)[0]}}}{{{_latex(e.right)[0]}}}", _ATOM
    if isinstance(e, Neg):
        return f"-{wrap(e.arg, _NEG)}", _NEG
    if isinstance(e, Pow):
        return f"{wrap(e.base, _ATOM)}^{{{e.exp}}}", _POW
    if isinstance(e, Sqrt):
        return f"\\sqrt{{{_latex(e.arg)[0]}}}", _ATOM
    if isinstance(e, Clamp):
        return _latex_cases(e, e), _ATOM
    raise TypeError(f"unknown node {e!r}")


def latex_expr(e: Expr) -> str:
    return _latex(e)[0]


def _latex_node(f: Node, depth: int = 0) -> str:
    if isinstance(f, Cmp):
        rel = "\\leq" if f.op == LE else "\\geq"
        return f"{latex_expr(f.lhs)} {rel} 0"
    if isinstance(f, And):
        return " \\wedge ".join(_latex_node(t, depth + 1) for t in f.terms)
    parts = [_latex_node(t, depth + 1) for t in f.terms]
    parts = [f"\\left({p}\\right)" if not isinstance(t, Cmp) else p for p, t in zip(parts, f.terms)]
    sep = " \\\\\n\\vee " if depth == 0 else " \\vee "
    return sep.join(parts) if parts else "\\mathrm{false}"


def to_latex(f: Node) -> str:
    """Multline display of the formula; clamped pieces print as cases."""
    body = _latex_node(f)
    return "\\begin{multline*}\n" + body + "\n\\end{multline*}\n"


# ---------------------------------------------------------------------------
# Mathematica


def _cas_number(v: Number) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return f"({v.numerator})" if v < 0 else str(v.numerator)
        return f"({v.numerator}/{v.denominator})"
    if math.isinf(v):
        return "Infinity" if v > 0 else "(-Infinity)"
    text = repr(float(v))
    if "e" in text:
        m, e = text.split("e")
        text = f"{m}*^{int(e)}"
    return f"({text})" if v < 0 else text


def cas_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return _cas_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return f"({cas_expr(e.left)} + {cas_expr(e.right)})"
    if isinstance(e, Sub):
        return f"({cas_expr(e.left)} - {cas_expr(e.right)})"
    if isinstance(e, Mul):
        return f"({cas_expr(e.left)}*{cas_expr(e.right)})"
    if isinstance(e, Div):
        return f"({cas_expr(e.left)}/{cas_expr(e.right)})"
    if isinstance(e, Neg):
        return f"(-{cas_expr(e.arg)})"
    if isinstance(e, Pow):
        return f"({cas_expr(e.base)})^({e.exp})"
    if isinstance(e, Sqrt):
        return f"Sqrt[{cas_expr(e.arg)}]"
    if isinstance(e, Clamp):
        raise SerializeError("clamp must be expanded before printing for a CAS")
    raise TypeError(f"unknown node {e!r}")


def _clamps(e: Expr) -> List[Clamp]:
    out: List[Clamp] = []
    for n in ex.walk(e):
        if isinstance(n, Clamp) and n not in out:
            out.append(n)
    return out


def _regimes(c: Clamp) -> List[Tuple[List[Cmp], Expr]]:
    """(guards, replacement) for each branch of a clamp; guards are closed."""
    a = c.arg
    out = []
    if c.lo is not None:
        out.append(([Cmp(_sub(a, ex.const(c.lo)), LE)], ex.const(c.lo)))
    mid = []
    if c.lo is not None:
        mid.append(Cmp(_sub(a, ex.const(c.lo)), GE))
    if c.hi is not None:
        mid.append(Cmp(_sub(a, ex.const(c.hi)), LE))
    out.append((mid, a))
    if c.hi is not None:
        out.append(([Cmp(_sub(a, ex.const(c.hi)), GE)], ex.const(c.hi)))
    return out


def expand_clamps(f: Node) -> Node:
    """Equivalent formula without clamp nodes.

    Each atom with clamps becomes a disjunction over the clamp branches, each
    guarded by the branch condition.  The branches overlap only where g is
    continuous, so the closed guards do not change the set.
    """
    if isinstance(f, Cmp):
        cs = _clamps(f.lhs)
        if not cs:
            return f
        alts = []
        for combo in itertools.product(*(_regimes(c) for c in cs)):
            lhs = f.lhs
            guards: List[Cmp] = []
            for c, (g, rep) in zip(cs, combo):
                lhs = _replace(lhs, c, rep)
                guards.extend(g)
            alts.append(And(tuple(guards) + (Cmp(lhs, f.op),)))
        return Or(tuple(alts))
    return type(f)(tuple(expand_clamps(t) for t in f.terms), f.kind, f.label)


def _cas_node(f: Node) -> str:
    if isinstance(f, Cmp):
        rel = "<=" if f.op == LE else ">="
        return f"{cas_expr(f.lhs)} {rel} 0"
    if not f.terms:
        return "True" if isinstance(f, And) else "False"
    sep = " && " if isinstance(f, And) else " || "
    return "(" + sep.join(_cas_node(t) for t in f.terms) + ")"


def to_cas(f: Node) -> str:
    """Mathematica boolean expression in x and y, free of piecewise terms."""
    return _cas_node(expand_clamps(f))


def region_plot(f: Node, window: Sequence[float]) -> str:
    x0, x1, y0, y1 = (float(v) for v in window)
    return f"RegionPlot[{to_cas(f)}, {{x, {x0!r}, {x1!r}}}, {{y, {y0!r}, {y1!r}}}]\n"


def serialize(f: Node, fmt: str, **kw) -> str:
    if fmt == "json":
        return to_json(f, kw.get("meta"))
    if fmt == "latex":
        return to_latex(f)
    if fmt == "cas":
        window = kw.get("window")
        return region_plot(f, window) if window else to_cas(f) + "\n"
    raise SerializeError(f"unknown format {fmt!r}; choose json, latex or cas")
