"""Quantifier-free unsafe regions.

A region is an ``Or`` of clauses.  Each clause is an ``And`` of atoms
``lhs <= 0`` or ``lhs >= 0`` whose ``lhs`` is an expression in ``x`` and
``y`` (obstacle coordinates).  Two clause kinds are produced:

* ``segment``: a fixed-pair stretch of the trajectory.  The obstacle must lie
  in the x band the polygon covers, between the two lines through the pair's
  corners at the segment ends, and between the two corner trajectories
  ``y = g(x - dx) + dy`` with g the piece clamped to the segment.
* ``notch``: the polygon placed at one transition, boundary or end point,
  one half-plane atom per edge.

All atoms are closed, so grazing contact counts as unsafe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import expr as ex
from .expr import Const, Expr, Number, Var
from .geometry import Polygon, cross
from .trajectory import Trajectory
from .transitions import Segment, TransitionPoint, build_segments, find_transitions

LE = "<=0"
GE = ">=0"
OPS = (LE, GE)

SEGMENT = "segment"
NOTCH = "notch"
PART = "part"
REGION = "region"

# corner pairs whose diagonal is this close to parallel with the motion get no line guard
DEGENERATE_SIN = 1e-12


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class Cmp:
    lhs: Expr
    op: str = LE

    def __post_init__(self):
        if self.op not in OPS:
            raise RegionError(f"comparison must be one of {OPS}, got {self.op!r}")


@dataclass(frozen=True)
class And:
    terms: Tuple
    kind: str = ""
    label: str = ""


@dataclass(frozen=True)
class Or:
    terms: Tuple
    kind: str = ""
    label: str = ""


Node = Union[Cmp, And, Or]
RegionFormula = Or


# ---------------------------------------------------------------------------
# building blocks


def linear(a, b, c, x: Expr = Var("x"), y: Expr = Var("y")) -> Expr:
    """a*x + b*y + c, leaving out zero terms and unit coefficients."""
    out: Optional[Expr] = None
    for coef, v in ((b, y), (a, x)):
        if coef == 0:
            continue
        if out is None:
            out = v if coef == 1 else ex.neg(v) if coef == -1 else ex.mul(ex.const(coef), v)
            continue
        mag = abs(coef)
        term = v if mag == 1 else ex.mul(ex.const(mag), v)
        out = ex.sub(out, term) if coef < 0 else ex.add(out, term)
    if out is None:
        return ex.const(c)
    if c > 0:
        return ex.add(out, ex.const(c))
    if c < 0:
        return ex.sub(out, ex.const(-c))
    return out


def _frame_vars(seg: Segment) -> Tuple[Var, Var]:
    # in the frame where the piece reads v = f(u): u is the piece parameter
    u = seg.piece.var
    return Var(u), Var("y" if u == "x" else "x")


def oblique_slope(seg: Segment) -> Optional[Number]:
    """Slope of the pair's diagonal when the corner curves need sloped extensions.

    The corner curves bound the swept band vertically only if, past the ends
    of a corner's path, the band is cut off by the end diagonals.  When the
    diagonal lies between the horizontal and the direction of motion, a flat
    extension would run through the band instead.  Such segments extend g
    along the diagonal's slope; others keep the flat clamp.  None means flat.
    """
    fp = seg.frame_polygon
    vi, vj = fp.vertex(seg.frame_pair.i), fp.vertex(seg.frame_pair.j)
    d = (vj[0] - vi[0], vj[1] - vi[1])
    if d[0] == 0 or d[1] == 0:
        return None
    k = cross((1, seg.piece.slope(seg.midpoint())), d)
    if k == 0 or (k > 0) == (d[1] > 0):
        return None
    return ex.div(ex.const(d[1]), ex.const(d[0])).value


def extended_g(seg: Segment, arg: Expr) -> Expr:
    """g(arg), continued past the segment ends flat or along the diagonal."""
    g = seg.g.expr_at(arg)
    k = oblique_slope(seg)
    if k is None:
        return g
    past = ex.sub(arg, ex.clamp(arg, seg.g.lo, seg.g.hi))
    return ex.add(g, ex.mul(ex.const(k), past))


def corner_curve(seg: Segment, k: int) -> Expr:
    """v - g(u - du_k) - dv_k for frame vertex k; zero on that corner's trajectory."""
    u, v = _frame_vars(seg)
    du, dv = seg.frame_polygon.vertex(k)
    return _minus(ex.sub(v, extended_g(seg, _minus(u, du))), dv)


def _minus(e: Expr, c) -> Expr:
    if c == 0:
        return e
    return ex.add(e, ex.const(-c)) if c < 0 else ex.sub(e, ex.const(c))


def corner_product_atom(seg: Segment) -> Cmp:
    fp = seg.frame_pair
    return Cmp(ex.mul(corner_curve(seg, fp.i), corner_curve(seg, fp.j)), LE)


def _frame_center(seg: Segment, s) -> Tuple[Number, Number]:
    return (s, seg.piece(s))


def segment_guards(seg: Segment) -> List[Cmp]:
    """x-band atoms followed by the two corner-line atoms.

    The band is the polygon's x half-extent around the segment, or the pair's
    own x extent when the corner curves use sloped extensions.  Infinite ends
    contribute no atom.  When the pair's diagonal is parallel to
    the motion only the band remains.
    """
    u, v = _frame_vars(seg)
    fp = seg.frame_polygon
    vi, vj = fp.vertex(seg.frame_pair.i), fp.vertex(seg.frame_pair.j)
    if oblique_slope(seg) is None:
        left, right = -fp.w, fp.w
    else:
        # sloped extensions meet outside the pair's own x extent; keep out of there
        left, right = min(vi[0], vj[0]), max(vi[0], vj[0])
    atoms: List[Cmp] = []
    if math.isfinite(seg.lo):
        atoms.append(Cmp(linear(1, 0, -(seg.lo + left), u, v), GE))
    if math.isfinite(seg.hi):
        atoms.append(Cmp(linear(1, 0, -(seg.hi + right), u, v), LE))

    d = (vj[0] - vi[0], vj[1] - vi[1])
    tangent = (1, seg.piece.slope(seg.midpoint()))
    k = cross(d, tangent)
    norm = math.hypot(float(d[0]), float(d[1])) * math.hypot(float(tangent[0]), float(tangent[1]))
    if abs(float(k)) <= DEGENERATE_SIN * norm:
        return atoms
    sign = 1 if k > 0 else -1

    def line(s):
        # d x (q - c - vi): zero on the line through both corners at placement c
        cu, cv = _frame_center(seg, s)
        c = d[0] * (cv + vi[1]) - d[1] * (cu + vi[0])
        return linear(-d[1], d[0], -c, u, v)

    if math.isfinite(seg.lo):
        atoms.append(Cmp(line(seg.lo), GE if sign > 0 else LE))
    if math.isfinite(seg.hi):
        atoms.append(Cmp(line(seg.hi), LE if sign > 0 else GE))
    return atoms


def segment_clause(seg: Segment) -> And:
    lo = "-inf" if not math.isfinite(seg.lo) else _fmt(seg.lo)
    hi = "inf" if not math.isfinite(seg.hi) else _fmt(seg.hi)
    label = f"piece {seg.piece_index} {seg.piece.var} in [{lo}, {hi}] corners {seg.pair.i},{seg.pair.j}"
    return And(tuple(segment_guards(seg)) + (corner_product_atom(seg),), SEGMENT, label)


def notch_clause(p: Polygon, placement) -> And:
    """Polygon at ``placement``: one closed half-plane per edge."""
    if isinstance(placement, TransitionPoint):
        placement = placement.placement
    cx, cy = placement
    if not (math.isfinite(cx) and math.isfinite(cy)):
        raise RegionError(f"notch placement must be finite, got {placement}")
    atoms = []
    for k in range(p.n):
        vx, vy = p.vertex(k)
        e = p.edge(k)
        # e x (q - c - v) >= 0
        c = -(e[0] * (cy + vy) - e[1] * (cx + vx))
        atoms.append(Cmp(linear(-e[1], e[0], c), GE))
    return And(tuple(atoms), NOTCH, f"at ({_fmt(cx)}, {_fmt(cy)})")


def _fmt(v) -> str:
    return ex.to_str(ex.const(v))


# ---------------------------------------------------------------------------
# compile


def compile(
    t: Trajectory,
    p: Polygon,
    transitions: Optional[Sequence[TransitionPoint]] = None,
    segments: Optional[Sequence[Segment]] = None,
) -> RegionFormula:
    """Unsafe region of ``p`` swept along ``t``: segment clauses, then notches."""
    if transitions is None:
        transitions = find_transitions(t, p)
    if segments is None:
        segments = build_segments(t, p, transitions)
    clauses = [segment_clause(s) for s in segments]
    clauses += [notch_clause(p, q) for q in transitions if q.finite]
    return Or(tuple(clauses), REGION)


def union(fs: Sequence[Node]) -> RegionFormula:
    """Disjunction of regions (e.g. the parts of a non-convex object)."""
    fs = list(fs)
    if len(fs) == 1:
        return fs[0]
    return Or(tuple(replace(f, kind=PART) if isinstance(f, Or) else f for f in fs), REGION)


def clauses(f: Node, kind: Optional[str] = None) -> List[And]:
    """Leaf clauses in order, optionally filtered by kind."""
    out = []
    if isinstance(f, Or):
        for t in f.terms:
            out.extend(clauses(t, kind))
    elif isinstance(f, And) and (kind is None or f.kind == kind):
        out.append(f)
    return out


def drop_clause(f: Or, kind: str, index: int) -> Or:
    """Copy of ``f`` without the index-th clause of the given kind."""
    seen = [-1]

    def walk(node):
        if isinstance(node, Or):
            kept = []
            for t in node.terms:
                r = walk(t)
                if r is not None:
                    kept.append(r)
            return replace(node, terms=tuple(kept))
        if isinstance(node, And) and node.kind == kind:
            seen[0] += 1
            if seen[0] == index:
                return None
        return node

    out = walk(f)
    if seen[0] < index:
        raise RegionError(f"formula has no {kind} clause number {index}")
    return out


def atoms(f: Node) -> List[Cmp]:
    if isinstance(f, Cmp):
        return [f]
    out = []
    for t in f.terms:
        out.extend(atoms(t))
    return out


def rename_vars(f: Node, names: Mapping[str, str]) -> Node:
    if isinstance(f, Cmp):
        return Cmp(ex.rename(f.lhs, names), f.op)
    return replace(f, terms=tuple(rename_vars(t, names) for t in f.terms))


# ---------------------------------------------------------------------------
# evaluation


def _holds(op: str, v) -> bool:
    return v <= 0 if op == LE else v >= 0


def evaluate(f: Node, q) -> bool:
    """True when q = (x, y) is unsafe.  Exact for rational formulas and points."""
    env = {"x": q[0], "y": q[1]} if not isinstance(q, Mapping) else q
    return _eval(f, env)


def _eval(f: Node, env) -> bool:
    if isinstance(f, Cmp):
        return _holds(f.op, ex.evaluate(f.lhs, env))
    if isinstance(f, And):
        return all(_eval(t, env) for t in f.terms)
    return any(_eval(t, env) for t in f.terms)


def evaluate_grid(f: Node, xs, ys) -> np.ndarray:
    """Vectorised :func:`evaluate` over arrays of points (same shape)."""
    xs, ys = np.broadcast_arrays(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    flat_x, flat_y = xs.ravel(), ys.ravel()
    idx = np.arange(flat_x.size)
    out = np.zeros(flat_x.size, dtype=bool)
    out[_true_subset(f, flat_x, flat_y, idx)] = True
    return out.reshape(xs.shape)


def _true_subset(f: Node, xs, ys, idx: np.ndarray) -> np.ndarray:
    # indices (a subset of idx) where f holds; And and Or short-circuit on subsets
    if idx.size == 0:
        return idx
    if isinstance(f, Cmp):
        v = ex.evaluate_array(f.lhs, {"x": xs[idx], "y": ys[idx]})
        return idx[v <= 0] if f.op == LE else idx[v >= 0]
    if isinstance(f, And):
        cur = idx
        for t in f.terms:
            cur = _true_subset(t, xs, ys, cur)
        return cur
    remaining = idx
    hits = []
    for t in f.terms:
        h = _true_subset(t, xs, ys, remaining)
        if h.size:
            hits.append(h)
            remaining = np.setdiff1d(remaining, h, assume_unique=True)
    return np.concatenate(hits) if hits else idx[:0]


def min_abs_atom(f: Node, xs, ys) -> np.ndarray:
    """Smallest |lhs| over all atoms; small values flag points on an atom boundary."""
    xs, ys = np.broadcast_arrays(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    best = np.full(xs.shape, np.inf)
    for a in atoms(f):
        best = np.minimum(best, np.abs(ex.evaluate_array(a.lhs, {"x": xs, "y": ys})))
    return best
