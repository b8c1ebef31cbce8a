"""Transition points and fixed-pair segments.

Within a piece the active corner pair only changes where the tangent is
parallel to a polygon side.  For a side e and a piece y = f(x) that is a root
of

    h(x) = f'(x) * e.x - e.y

which avoids any tan/arctan of the side angle.  x = f(y) pieces are handled
in the axis-swapped frame, where they read y = f(x) and the polygon is
reflected across y = x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .expr import DomainError, Number
from .geometry import ActivePair, Polygon, choose_pair
from .trajectory import Y_OF_X, ClampedPiece, Piece, Trajectory, clamp, unit_to_param

SLOPE_TRANSITION = "slope-transition"
PIECEWISE_BOUNDARY = "piecewise-boundary"
DOMAIN_ENDPOINT = "domain-endpoint"
_PRIORITY = {DOMAIN_ENDPOINT: 0, PIECEWISE_BOUNDARY: 1, SLOPE_TRANSITION: 2}

SCAN_SAMPLES = 4096
BISECT_RTOL = 1e-13
EPS_MERGE = 1e-9
TANGENCY_TOL = 1e-9


class TransitionError(RuntimeError):
    pass


@dataclass(frozen=True)
class TransitionPoint:
    """A trajectory point in plane coordinates.

    ``s`` is the piece parameter (x for y = f(x) pieces).  Infinite ends are
    kept as sentinels with an infinite parameter and ``finite`` false.
    """

    x: Number
    y: Number
    kind: str
    piece: int
    s: Number = field(compare=False, default=None)
    tangent: bool = field(compare=False, default=False)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    @property
    def placement(self) -> Tuple[Number, Number]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Segment:
    """Part of one piece over which the active pair stays fixed.

    ``lo``/``hi`` are piece parameters.  ``frame_polygon`` and ``frame_pair``
    describe the pair in the frame where the piece reads y = f(x); ``pair``
    uses the original polygon's vertex numbering.
    """

    piece_index: int
    piece: Piece
    lo: Number
    hi: Number
    pair: ActivePair
    frame_polygon: Polygon
    frame_pair: ActivePair
    g: ClampedPiece

    @property
    def orientation(self) -> str:
        return self.piece.orientation

    def midpoint(self) -> Number:
        return _midpoint(self.lo, self.hi)


def frame_polygon(p: Polygon, orientation: str) -> Polygon:
    return p if orientation == Y_OF_X else p.swapped()


def to_original_index(p: Polygon, k: int, orientation: str) -> int:
    # swapped() reverses the vertex order
    return k if orientation == Y_OF_X else p.n - 1 - k


def side_directions(p: Polygon) -> List[Tuple[Number, Number]]:
    """One representative per side direction modulo 180 degrees."""
    out = []
    for e in p.edges:
        if e[0] < 0 or (e[0] == 0 and e[1] < 0):
            e = (-e[0], -e[1])
        if not any(_parallel(e, o) for o in out):
            out.append(e)
    return out


def _parallel(a, b) -> bool:
    c = a[0] * b[1] - a[1] * b[0]
    if isinstance(c, float):
        return abs(c) <= 1e-12 * math.hypot(float(a[0]), float(a[1])) * math.hypot(float(b[0]), float(b[1]))
    return c == 0


def _midpoint(lo, hi) -> Number:
    if math.isfinite(lo) and math.isfinite(hi):
        return (lo + hi) / 2
    if math.isfinite(lo):
        return lo + 1
    if math.isfinite(hi):
        return hi - 1
    return Fraction(0)


# ---------------------------------------------------------------------------
# root finding


def _h_values(piece: Piece, e, s: np.ndarray) -> np.ndarray:
    return piece.slopes(s) * float(e[0]) - float(e[1])


def _h_exact(piece: Piece, e, s) -> Number:
    return piece.slope(s) * e[0] - e[1]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _bisect(piece: Piece, e, a: float, b: float, exact: bool) -> float:
    """Shrink a sign-change bracket [a, b] of h to relative width BISECT_RTOL."""

    def h(s):
        if exact:
            return _h_exact(piece, e, Fraction(s))
        return float(_h_exact(piece, e, s))

    def done(v):
        return Fraction(v) if exact else v

    ha, hb = _sign(h(a)), _sign(h(b))
    if ha == 0:
        return done(a)
    if hb == 0:
        return done(b)
    if ha == hb:
        raise TransitionError(f"bracket [{a}, {b}] has no sign change")
    for _ in range(2000):
        m = 0.5 * (a + b)
        if b - a <= BISECT_RTOL * max(1.0, abs(m)) or m in (a, b):
            return m
        hm = _sign(h(m))
        if hm == 0:
            return done(m)
        if hm == ha:
            a = m
        else:
            b = m
    raise TransitionError(f"bisection did not converge on bracket [{a}, {b}]")


def _golden_min(fun, a: float, b: float, iters: int = 200) -> float:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if b - a <= BISECT_RTOL * max(1.0, abs(a)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def slope_roots(piece: Piece, e, samples: int = SCAN_SAMPLES) -> List[Tuple[float, bool]]:
    """Roots of h in the open subdomain as (s, tangent) pairs.

    ``tangent`` marks touching roots where h does not change sign.  Vertical
    sides give no roots, since f' is finite inside a valid piece.
    """
    if e[0] == 0:
        return []
    lo, hi = float(piece.lo), float(piece.hi)
    t = np.arange(1, samples) / samples
    s = unit_to_param(t, lo, hi)
    try:
        h = _h_values(piece, e, s)
    except DomainError as err:
        raise TransitionError(f"slope undefined inside [{lo}, {hi}]: {err}") from None
    exact = ex.is_rational(piece.df) and all(isinstance(c, Fraction) for c in e)
    roots: List[Tuple[float, bool]] = []
    zero = h == 0
    zl = np.concatenate([[False], zero[:-1]])
    zr = np.concatenate([zero[1:], [False]])
    # isolated exact zeros; runs of zeros mean h vanishes identically there
    for k in np.nonzero(zero & ~zl & ~zr)[0]:
        roots.append((Fraction(float(s[k])) if exact else float(s[k]), False))
    for k in np.nonzero(~zero[:-1] & ~zero[1:] & (h[:-1] * h[1:] < 0))[0]:
        roots.append((_bisect(piece, e, float(s[k]), float(s[k + 1]), exact), False))
    # touching roots: local minima of |h| that reach zero without a sign change
    a = np.abs(h)
    scale = math.hypot(float(e[0]), float(e[1]))
    hm, hc, hp = h[:-2], h[1:-1], h[2:]
    am, ac, ap = a[:-2], a[1:-1], a[2:]
    lower = np.minimum(am, ap) - ac
    # the minimum could plausibly reach zero between the neighbours
    cand = (~zero[1:-1]) & (hm * hp > 0) & (hm * hc > 0) & (ac < am) & (ac <= ap) & (ac <= 4.0 * lower)
    for k in np.nonzero(cand)[0] + 1:
        fun = lambda v: abs(float(_h_exact(piece, e, float(v))))
        m = _golden_min(fun, float(s[k - 1]), float(s[k + 1]))
        tol = TANGENCY_TOL * scale * (1.0 + abs(float(piece.slope(m))))
        if fun(m) <= tol:
            roots.append((m, True))
    roots.sort()
    return roots


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= EPS_MERGE * max(1.0, abs(a), abs(b))


def piece_breaks(piece: Piece, p: Polygon, samples: int = SCAN_SAMPLES) -> List[Tuple[float, bool]]:
    """Sorted interior slope transitions of one piece, merged within EPS_MERGE."""
    fp = frame_polygon(p, piece.orientation)
    found: List[Tuple[float, bool]] = []
    for e in side_directions(fp):
        found.extend(slope_roots(piece, e, samples))
    found.sort()
    out: List[Tuple[float, bool]] = []
    for s, tangent in found:
        if _close(s, float(piece.lo)) or _close(s, float(piece.hi)):
            continue
        if out and _close(s, out[-1][0]):
            out[-1] = (out[-1][0], out[-1][1] and tangent)
            continue
        out.append((s, tangent))
    return out


def _point(piece: Piece, s, kind: str, index: int, tangent: bool = False) -> TransitionPoint:
    if not math.isfinite(s):
        sentinel = float(s)
        x, y = (sentinel, math.nan) if piece.orientation == Y_OF_X else (math.nan, sentinel)
        return TransitionPoint(x, y, kind, index, s, tangent)
    x, y = piece.point(s)
    return TransitionPoint(x, y, kind, index, s, tangent)


def find_transitions(t: Trajectory, p: Polygon, samples: int = SCAN_SAMPLES) -> List[TransitionPoint]:
    """All slope transitions, piece boundaries and domain ends, sorted by (x, y).

    Points within EPS_MERGE of each other in the plane are merged, keeping
    the most significant kind.  A jump between pieces leaves two placements.
    Infinite ends appear as sentinels with ``finite`` false.
    """
    pts: List[TransitionPoint] = []
    last = len(t.pieces) - 1
    for k, piece in enumerate(t.pieces):
        for end, at_domain_end in ((piece.lo, k == 0), (piece.hi, k == last)):
            kind = DOMAIN_ENDPOINT if at_domain_end else PIECEWISE_BOUNDARY
            pts.append(_point(piece, end, kind, k))
        for s, tangent in piece_breaks(piece, p, samples):
            pts.append(_point(piece, s, SLOPE_TRANSITION, k, tangent))
    return merge_points(pts)


def merge_points(pts: Sequence[TransitionPoint]) -> List[TransitionPoint]:
    finite = [q for q in pts if q.finite]
    sentinels = [q for q in pts if not q.finite]
    finite.sort(key=lambda q: (float(q.x), float(q.y), _PRIORITY[q.kind]))
    kept: List[TransitionPoint] = []
    for q in finite:
        dup = None
        for i, r in enumerate(kept):
            if _close(float(q.x), float(r.x)) and _close(float(q.y), float(r.y)):
                dup = i
                break
        if dup is None:
            kept.append(q)
        elif _PRIORITY[q.kind] < _PRIORITY[kept[dup].kind]:
            kept[dup] = q
    out = kept + _unique_sentinels(sentinels)
    out.sort(key=lambda q: (_sort_key(q.x), _sort_key(q.y)))
    return out


def _unique_sentinels(pts):
    seen = {}
    for q in pts:
        key = (repr(float(q.x)), repr(float(q.y)))
        seen.setdefault(key, q)
    return list(seen.values())


def _sort_key(v) -> float:
    v = float(v)
    return 0.0 if math.isnan(v) else v


# ---------------------------------------------------------------------------
# segments


def pair_at(piece: Piece, p: Polygon, s) -> ActivePair:
    """Frame pair at parameter s (see :class:`Segment`)."""
    fp = frame_polygon(p, piece.orientation)
    return choose_pair(fp, (1, piece.slope(s)))


def build_segments(
    t: Trajectory, p: Polygon, transitions: Optional[Sequence[TransitionPoint]] = None
) -> List[Segment]:
    """Cut every piece at its slope transitions.

    The pair of each segment is taken from the slope at its midpoint.
    Zero-width segments are dropped.
    """
    if transitions is None:
        transitions = find_transitions(t, p)
    segs: List[Segment] = []
    for k, piece in enumerate(t.pieces):
        inner = sorted(
            {
                q.s
                for q in transitions
                if q.piece == k and q.kind == SLOPE_TRANSITION and piece.lo < q.s < piece.hi
            }
        )
        cuts = [piece.lo] + inner + [piece.hi]
        fp = frame_polygon(p, piece.orientation)
        for a, b in zip(cuts, cuts[1:]):
            if not a < b:
                continue
            fpair = pair_at(piece, p, _midpoint(a, b))
            i = to_original_index(p, fpair.i, piece.orientation)
            j = to_original_index(p, fpair.j, piece.orientation)
            pair = ActivePair(i, j, fpair.interval)
            segs.append(Segment(k, piece, a, b, pair, fp, fpair, clamp(piece, (a, b))))
    return segs
