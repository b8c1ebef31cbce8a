"""Convex polygons translating without rotation.

A polygon is stored as vertex offsets from its reference center, counter-
clockwise.  Directions are handled as vectors and compared with cross-product
sign tests, so rational inputs give exact answers and no arctan branch cuts
appear anywhere in the predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

from .expr import Number, _num

Point = Tuple[Number, Number]


class GeometryError(ValueError):
    pass


def cross(a, b) -> Number:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> Number:
    return a[0] * b[0] + a[1] * b[1]


def direction_angle(d) -> float:
    """Angle of a direction vector in degrees, in [0, 360)."""
    a = math.degrees(math.atan2(float(d[1]), float(d[0])))
    return a + 360.0 if a < 0 else a


def direction(theta_deg) -> Point:
    """Unit direction for an angle in degrees; exact on multiples of 90."""
    t = theta_deg % 360
    exact = {0: (1, 0), 90: (0, 1), 180: (-1, 0), 270: (0, -1)}
    if t in exact:
        return tuple(Fraction(c) for c in exact[t])
    r = math.radians(t)
    return (math.cos(r), math.sin(r))


@dataclass(frozen=True)
class ActivePair:
    """Vertex ``i`` is the extreme corner on the right of the motion, ``j`` on the left.

    ``interval`` is the range of motion angles (degrees, modulo 180) over
    which both stay active.
    """

    i: int
    j: int
    interval: Tuple[float, float] = field(default=(0.0, 180.0), compare=False)


@dataclass(frozen=True)
class Polygon:
    vertices: Tuple[Point, ...]
    centrally_symmetric: bool = field(init=False, compare=False)
    w: Number = field(init=False, compare=False)
    h: Number = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "w", max(abs(v[0]) for v in self.vertices))
        object.__setattr__(self, "h", max(abs(v[1]) for v in self.vertices))
        object.__setattr__(self, "centrally_symmetric", _symmetric(self.vertices))

    def __len__(self):
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, k: int) -> Point:
        return self.vertices[k % self.n]

    def edge(self, k: int) -> Point:
        a, b = self.vertex(k), self.vertex(k + 1)
        return (b[0] - a[0], b[1] - a[1])

    @property
    def edges(self) -> List[Point]:
        return [self.edge(k) for k in range(self.n)]

    @property
    def side_angles(self) -> List[float]:
        """Direction angle of edge k (v_k to v_k+1), degrees in [0, 360)."""
        return [direction_angle(e) for e in self.edges]

    @property
    def x_range(self) -> Tuple[Number, Number]:
        xs = [v[0] for v in self.vertices]
        return min(xs), max(xs)

    @property
    def y_range(self) -> Tuple[Number, Number]:
        ys = [v[1] for v in self.vertices]
        return min(ys), max(ys)

    def translated(self, dx, dy) -> "Polygon":
        return make_polygon([(v[0] + dx, v[1] + dy) for v in self.vertices])

    def scaled(self, s) -> "Polygon":
        return make_polygon([(v[0] * s, v[1] * s) for v in self.vertices])

    def swapped(self) -> "Polygon":
        """Reflection across y = x (order reversed to stay counter-clockwise)."""
        return make_polygon([(v[1], v[0]) for v in reversed(self.vertices)])

    def mirrored_x(self) -> "Polygon":
        """Reflection across the y axis."""
        return make_polygon([(-v[0], v[1]) for v in reversed(self.vertices)])

    def to_list(self) -> List[List[float]]:
        return [[float(v[0]), float(v[1])] for v in self.vertices]


def _symmetric(vs) -> bool:
    n = len(vs)
    if n % 2:
        return False
    half = n // 2
    cx = vs[0][0] + vs[half][0]
    cy = vs[0][1] + vs[half][1]
    scale = max(max(abs(v[0]), abs(v[1])) for v in vs)
    tol = 1e-12 * float(scale)
    for k in range(n):
        a, b = vs[k], vs[(k + half) % n]
        if abs(a[0] + b[0] - cx) > tol or abs(a[1] + b[1] - cy) > tol:
            return False
    return True


def make_polygon(vertices: Sequence[Sequence]) -> Polygon:
    """Validate counter-clockwise, strictly convex vertex offsets."""
    vs = tuple((_num(v[0]), _num(v[1])) for v in vertices)
    n = len(vs)
    if n < 3:
        raise GeometryError(f"a polygon needs at least 3 vertices, got {n}")
    for k in range(n):
        a, b = vs[k], vs[(k + 1) % n]
        if a == b:
            raise GeometryError(f"vertices {k} and {(k + 1) % n} coincide")
    turns = []
    for k in range(n):
        a, b, c = vs[k - 1], vs[k], vs[(k + 1) % n]
        turns.append(cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])))
    if any(t == 0 for t in turns):
        k = next(i for i, t in enumerate(turns) if t == 0)
        raise GeometryError(f"vertex {k} is collinear with its neighbours")
    if all(t < 0 for t in turns):
        raise GeometryError("vertices are clockwise; give them counter-clockwise")
    if any(t < 0 for t in turns):
        raise GeometryError("polygon is not convex")
    # a star polygon turns left everywhere but winds more than once
    winding = sum(
        math.atan2(float(cross(_sub(vs[k], vs[k - 1]), _sub(vs[(k + 1) % n], vs[k]))),
                   float(dot(_sub(vs[k], vs[k - 1]), _sub(vs[(k + 1) % n], vs[k]))))
        for k in range(n)
    )
    if winding > 2 * math.pi + 1e-9:
        raise GeometryError("polygon is self-intersecting (not convex)")
    return Polygon(vs)


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def rectangle(w, h) -> Polygon:
    """Axis-aligned rectangle with half-width ``w`` and half-height ``h``."""
    w, h = _num(w), _num(h)
    return make_polygon([(w, h), (-w, h), (-w, -h), (w, -h)])


def regular_ngon(n: int, inscribed_radius, rotation_deg=0) -> Polygon:
    """Regular n-gon whose inscribed circle has the given radius (the apothem).

    Vertex k sits at angle ``rotation_deg + 360 k / n``.
    """
    if n < 3:
        raise GeometryError(f"regular polygon needs n >= 3, got {n}")
    r = float(inscribed_radius)
    if not r > 0:
        raise GeometryError(f"inscribed radius must be positive, got {inscribed_radius}")
    return regular_ngon_circumradius(n, r / math.cos(math.pi / n), rotation_deg)


def regular_ngon_circumradius(n: int, radius, rotation_deg=0) -> Polygon:
    if n < 3:
        raise GeometryError(f"regular polygon needs n >= 3, got {n}")
    R = float(radius)
    if not R > 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    verts = []
    for k in range(n):
        t = math.radians(float(rotation_deg) + 360.0 * k / n)
        verts.append((_snap(R * math.cos(t)), _snap(R * math.sin(t))))
    return make_polygon(_unify_magnitudes(verts, R))


def _unify_magnitudes(verts, scale: float):
    # sin(60) and sin(120) differ in the last bit; make mirror vertices exact mirrors
    clusters: List[List[float]] = []
    for v in sorted(abs(c) for pt in verts for c in pt):
        if clusters and v - clusters[-1][0] <= 1e-12 * scale:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    reps = [math.fsum(c) / len(c) for c in clusters]

    def fix(c):
        r = min(reps, key=lambda m: abs(m - abs(c)))
        return math.copysign(r, c) if r else 0.0

    return [(fix(x), fix(y)) for x, y in verts]


def _snap(v: float) -> float:
    # cos(pi/2) and friends come out as 6e-17; keep axis-aligned shapes exact
    r = round(v)
    return float(r) if abs(v - r) < 1e-12 else v


# ---------------------------------------------------------------------------
# active corners


# relative slack for float inputs so a direction computed from an angle still
# ties with a side whose endpoints are irrational
ANGLE_EPS = 1e-12


def _ge0(a, b) -> bool:
    c = cross(a, b)
    if isinstance(c, float):
        return c >= -ANGLE_EPS * math.hypot(float(a[0]), float(a[1])) * math.hypot(float(b[0]), float(b[1]))
    return c >= 0


def _in_cone(e_in, e_out, d) -> bool:
    """Is direction d within the turn from e_in to e_out (closed)?"""
    return _ge0(e_in, d) and _ge0(d, e_out)


def active_vertices(p: Polygon, d) -> List[int]:
    """Vertices extreme on the right of motion direction d (ties give two)."""
    return [k for k in range(p.n) if _in_cone(p.edge(k - 1), p.edge(k), d)]


def active_corners(p: Polygon, theta) -> List[ActivePair]:
    """Active corner pairs for motion at angle ``theta`` (degrees) or along a vector.

    Vertex k is active for direction d when d lies between the directions of
    its incoming and outgoing edges; the partner is the vertex active for -d.
    When d is parallel to a side both endpoints of that side are reported.
    """
    d = theta if isinstance(theta, (tuple, list)) else direction(theta)
    if d[0] == 0 and d[1] == 0:
        raise GeometryError("zero direction")
    right = active_vertices(p, d)
    left = active_vertices(p, (-d[0], -d[1]))
    return [ActivePair(i, j, pair_interval(p, i, j)) for i, j in product(right, left)]


def vertex_interval(p: Polygon, k: int) -> Tuple[float, float]:
    """Angles (degrees) of the incoming and outgoing edge of vertex k."""
    # rounded so that float vertices of regular polygons give clean degrees
    return (round(direction_angle(p.edge(k - 1)), 9) % 360.0,
            round(direction_angle(p.edge(k)), 9) % 360.0)


def pair_interval(p: Polygon, i: int, j: int) -> Tuple[float, float]:
    """Motion angles (mod 180) where i is active on the right and j on the left.

    Returned as ``(lo, hi)`` with ``hi`` possibly wrapping past 180; a
    degenerate interval (lo == hi) means the pair only occurs on a tie.
    """
    a0, a1 = vertex_interval(p, i)
    b0, b1 = vertex_interval(p, j)
    b0, b1 = (b0 + 180.0) % 360.0, (b1 + 180.0) % 360.0
    span_a = (a1 - a0) % 360.0
    span_b = (b1 - b0) % 360.0
    # start of the intersection is whichever start lies inside the other arc
    if (b0 - a0) % 360.0 <= span_a:
        lo, off = b0, (b0 - a0) % 360.0
        hi_len = min(span_a - off, span_b)
    else:
        lo, off = a0, (a0 - b0) % 360.0
        hi_len = min(span_b - off, span_a)
    hi_len = max(hi_len, 0.0)
    lo = lo % 180.0
    return lo, lo + hi_len


def pair_width(p: Polygon, pair: ActivePair, d) -> float:
    """|sin| of the angle between the corner diagonal and the motion direction."""
    vi, vj = p.vertex(pair.i), p.vertex(pair.j)
    diag = (float(vj[0] - vi[0]), float(vj[1] - vi[1]))
    dd = (float(d[0]), float(d[1]))
    return abs(cross(dd, diag)) / (math.hypot(*dd) * math.hypot(*diag))


def choose_pair(p: Polygon, d) -> ActivePair:
    """Single pair for a direction; on ties the diagonal most transverse to d."""
    pairs = active_corners(p, d)
    best = max(pairs, key=lambda pr: (round(pair_width(p, pr, d), 12), -pr.i, -pr.j))
    return best


# ---------------------------------------------------------------------------
# containment and Minkowski sums


def point_in_polygon(p: Polygon, center, q, eps: float = 1e-12) -> bool:
    """Closed containment of q in p placed at ``center`` (half-plane tests)."""
    cx, cy = center
    scale = float(max(p.w, p.h))
    for k in range(p.n):
        v = p.vertex(k)
        e = p.edge(k)
        s = cross(e, (q[0] - cx - v[0], q[1] - cy - v[1]))
        if s < 0 and (eps == 0 or s < -eps * scale * (1 + scale)):
            return False
    return True


def minkowski_vertices(a: Sequence[Point], b: Sequence[Point]) -> List[Point]:
    """Vertices of the Minkowski sum of two convex CCW vertex lists.

    Either list may be a single point.  Collinear output vertices are dropped.
    """
    if len(a) == 1 or len(b) == 1:
        single, other = (a, b) if len(a) == 1 else (b, a)
        s = single[0]
        return [(v[0] + s[0], v[1] + s[1]) for v in other]
    ia = min(range(len(a)), key=lambda k: (a[k][1], a[k][0]))
    ib = min(range(len(b)), key=lambda k: (b[k][1], b[k][0]))
    a = list(a[ia:]) + list(a[:ia])
    b = list(b[ib:]) + list(b[:ib])
    na, nb = len(a), len(b)
    out = []
    i = j = 0
    while i < na or j < nb:
        out.append((a[i % na][0] + b[j % nb][0], a[i % na][1] + b[j % nb][1]))
        ea = _sub(a[(i + 1) % na], a[i % na])
        eb = _sub(b[(j + 1) % nb], b[j % nb])
        c = cross(ea, eb)
        if j >= nb or (i < na and c > 0):
            i += 1
        elif i >= na or c < 0:
            j += 1
        else:
            i += 1
            j += 1
    return _drop_collinear(out)


def _drop_collinear(vs: List[Point]) -> List[Point]:
    changed = True
    vs = list(vs)
    while changed and len(vs) > 3:
        changed = False
        for k in range(len(vs)):
            a, b, c = vs[k - 1], vs[k], vs[(k + 1) % len(vs)]
            t = cross(_sub(b, a), _sub(c, b))
            scale = max(abs(float(x)) for x in (*a, *b, *c)) or 1.0
            if b == a or abs(float(t)) <= 1e-12 * scale * scale:
                del vs[k]
                changed = True
                break
    return vs


def inflate(obj: Polygon, obstacle: Union[Polygon, Sequence[Point]]) -> Polygon:
    """Object grown by the point reflection of the obstacle.

    The two bodies overlap with obstacle center at offset d from the object
    center iff ``point_in_polygon(inflate(obj, obstacle), (0, 0), d)``.
    """
    ob = obstacle.vertices if isinstance(obstacle, Polygon) else [tuple(map(_num, v)) for v in obstacle]
    reflected = [(-v[0], -v[1]) for v in ob]
    return make_polygon(minkowski_vertices(list(obj.vertices), reflected))


def polygons_intersect(a: Polygon, ca, b: Polygon, cb) -> bool:
    """Closed intersection test of two placed convex polygons (separating axes)."""
    pa = [(v[0] + ca[0], v[1] + ca[1]) for v in a.vertices]
    pb = [(v[0] + cb[0], v[1] + cb[1]) for v in b.vertices]
    for poly, other in ((pa, pb), (pb, pa)):
        n = len(poly)
        for k in range(n):
            e = _sub(poly[(k + 1) % n], poly[k])
            if all(cross(e, _sub(q, poly[k])) < 0 for q in other):
                return False
    return True
