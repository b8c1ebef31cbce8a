"""Randomised property checks shared by the unit and acceptance suites.

Every check runs a fixed number of seeded cases and returns a
:class:`Outcome`; results are cached so a session pays for each suite once.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import numpy as np

from activecorners import expr as ex
from activecorners import region as rg
from activecorners.geometry import inflate, make_polygon, polygons_intersect, rectangle
from activecorners.oracle import covered, gap_margin, sample_centers
from activecorners.trajectory import clamp, make_piece, make_trajectory
from activecorners.transitions import SLOPE_TRANSITION, find_transitions

CASES = 200
SEED = 20240607


@dataclass
class Outcome:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases >= CASES and not self.failures

    def line(self) -> str:
        extra = f", {self.skipped} skipped" if self.skipped else ""
        return f"{self.name}: {self.cases} cases{extra}, {len(self.failures)} failures"


# ---------------------------------------------------------------------------
# generators


def random_polygon(rng, n_max=7):
    """Convex polygon with vertices on a jittered, off-center ellipse."""
    n = int(rng.integers(3, n_max + 1))
    while True:
        phi = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.concatenate([phi, [phi[0] + 2 * np.pi]]))
        if gaps.min() > 0.3 and gaps.max() < np.pi - 0.1:
            break
    a, b = rng.uniform(0.3, 1.5, 2)
    off = rng.uniform(-0.3, 0.3, 2)
    return make_polygon([(float(a * (np.cos(t) + off[0])), float(b * (np.sin(t) + off[1]))) for t in phi])


def random_trajectory(rng):
    """A curved piece followed by a line that may jump away from it."""
    kind = int(rng.integers(0, 3))
    lo, hi = float(rng.uniform(-3, -1)), float(rng.uniform(1, 3))
    if kind == 0:
        c = rng.uniform(-1, 1, 3).round(3)
        f = f"{c[0]}*x^2 + {c[1]}*x + {c[2]}"
    elif kind == 1:
        c = rng.uniform(-0.5, 0.5, 4).round(3)
        f = f"{c[0]}*x^3 + {c[1]}*x^2 + {c[2]}*x + {c[3]}"
    else:
        f = "sqrt(16 - x^2)"
        lo, hi = float(rng.uniform(-3.9, -1)), float(rng.uniform(1, 3.9))
    mid = float(rng.uniform(lo + 0.3, hi - 0.3))
    c2 = rng.uniform(-1, 1, 2).round(3)
    first = make_piece(f, lo, mid)
    y = float(first(mid))
    jump = float(c2[1]) if rng.random() < 0.5 else 0.0
    second = make_piece(f"{c2[0]}*(x - {mid!r}) + {y + jump!r}", mid, hi)
    return make_trajectory([first, second])


def random_expression(rng, depth=3):
    """Expression text in x that is smooth on [-2, 2]."""
    if depth == 0 or rng.random() < 0.25:
        return "x" if rng.random() < 0.6 else f"{rng.uniform(-3, 3):.4f}"
    a, b = random_expression(rng, depth - 1), random_expression(rng, depth - 1)
    op = int(rng.integers(0, 6))
    if op == 0:
        return f"({a} + {b})"
    if op == 1:
        return f"({a} - {b})"
    if op == 2:
        return f"({a}) * ({b})"
    if op == 3:
        return f"({a}) / (({b})^2 + {rng.uniform(0.5, 2):.3f})"
    if op == 4:
        return f"({a})^{int(rng.integers(2, 4))}"
    return f"sqrt(({a})^2 + {rng.uniform(0.5, 2):.3f})"


def _stable_points(f, pts, tol=1e-6):
    return rg.min_abs_atom(f, pts[:, 0], pts[:, 1]) > tol


# ---------------------------------------------------------------------------
# properties


@lru_cache(maxsize=None)
def translation_equivariance() -> Outcome:
    out = Outcome("translation equivariance")
    rng = np.random.default_rng(SEED)
    while out.cases < CASES:
        p, t = random_polygon(rng), random_trajectory(rng)
        a, b = (float(v) for v in rng.uniform(-5, 5, 2).round(2))
        f = rg.compile(t, p)
        g = rg.compile(t.translated(a, b), p)
        q = rng.uniform([-5, -6], [5, 6], size=(200, 2))
        keep = _stable_points(f, q)
        u = rg.evaluate_grid(f, q[keep, 0], q[keep, 1])
        v = rg.evaluate_grid(g, q[keep, 0] + a, q[keep, 1] + b)
        if not np.array_equal(u, v):
            out.failures.append(f"case {out.cases}: shift ({a}, {b}) differs at {int((u != v).sum())} points")
        out.cases += 1
    return out


@lru_cache(maxsize=None)
def reflection_equivariance() -> Outcome:
    out = Outcome("reflection equivariance")
    rng = np.random.default_rng(SEED + 1)
    while out.cases < CASES:
        p, t = random_polygon(rng), random_trajectory(rng)
        f = rg.compile(t, p)
        g = rg.compile(t.mirrored_x(), p.mirrored_x())
        q = rng.uniform([-5, -6], [5, 6], size=(200, 2))
        keep = _stable_points(f, q)
        u = rg.evaluate_grid(f, q[keep, 0], q[keep, 1])
        v = rg.evaluate_grid(g, -q[keep, 0], q[keep, 1])
        if not np.array_equal(u, v):
            out.failures.append(f"case {out.cases}: mirror differs at {int((u != v).sum())} points")
        out.cases += 1
    return out


@lru_cache(maxsize=None)
def derivative_vs_difference() -> Outcome:
    out = Outcome("derivative vs finite difference")
    rng = np.random.default_rng(SEED + 2)
    h = 1e-5
    while out.cases < CASES:
        e = ex.parse(random_expression(rng))
        d = ex.differentiate(e)
        v = float(rng.uniform(-2, 2))
        exact = float(ex.evaluate(d, v))
        fd = (float(ex.evaluate(e, v + h)) - float(ex.evaluate(e, v - h))) / (2 * h)
        # central difference truncation grows with the third derivative; skip wild cases
        scale = max(abs(float(ex.evaluate(e, v + s))) for s in (-0.01, 0, 0.01))
        if scale > 1e4:
            out.skipped += 1
            continue
        if abs(exact - fd) > 1e-6 * (1 + abs(exact)):
            out.failures.append(f"{ex.to_str(e)} at {v}: {exact} vs {fd}")
        out.cases += 1
    return out


@lru_cache(maxsize=None)
def clamp_continuity() -> Outcome:
    out = Outcome("g continuity")
    rng = np.random.default_rng(SEED + 3)
    while out.cases < 1000:
        c = [float(v) for v in rng.uniform(-2, 2, 4)]
        piece = make_piece(f"{c[0]!r}*x^3 + {c[1]!r}*x^2 + {c[2]!r}*x + {c[3]!r}", -3, 3)
        a, b = sorted(float(v) for v in rng.uniform(-3, 3, 2))
        g = clamp(piece, (a, b))
        for end in (a, b):
            val = float(g(end))
            for side in (-1e-13, 1e-13):
                s = end + side * max(1.0, abs(end))
                if abs(float(g(s)) - val) > 1e-12 * (1 + abs(val)) * 50:
                    out.failures.append(f"jump at {end} on [{a}, {b}]")
        out.cases += 1
    return out


@lru_cache(maxsize=None)
def inflation_reduction() -> Outcome:
    out = Outcome("inflation reduction")
    rng = np.random.default_rng(SEED + 4)
    step = 2e-3
    while out.cases < CASES:
        p, t = random_polygon(rng, 5), random_trajectory(rng)
        obstacle = random_polygon(rng, 5).scaled(0.5)
        f = rg.compile(t, inflate(p, obstacle))
        center = tuple(float(v) for v in rng.uniform([-4, -5], [4, 5]))
        unsafe = rg.evaluate(f, center)
        centers, chord = sample_centers(t, p, step)
        placed = obstacle.translated(*center)
        ox, oy = placed.x_range, placed.y_range
        reach = float(max(p.w, p.h))
        near = centers[(abs(centers[:, 0] - center[0]) <= reach + float(ox[1] - ox[0]))
                       & (abs(centers[:, 1] - center[1]) <= reach + float(oy[1] - oy[0]))]
        hit = any(polygons_intersect(p, (c[0], c[1]), placed, (0, 0)) for c in near)
        margin = gap_margin([inflate(p, obstacle)], max(chord, step))
        ring = [(center[0] + margin * math.cos(k * math.pi / 8), center[1] + margin * math.sin(k * math.pi / 8))
                for k in range(16)]
        if any(rg.evaluate(f, q) != unsafe for q in ring):
            out.skipped += 1
            continue
        if hit != unsafe:
            out.failures.append(f"case {out.cases}: formula {unsafe}, sampled sweep {hit} at {center}")
        out.cases += 1
    return out


@lru_cache(maxsize=None)
def notch_mutation() -> Outcome:
    out = Outcome("notch mutation")
    rng = np.random.default_rng(SEED + 5)
    while out.cases < CASES:
        a = float(rng.choice([-1, 1]) * rng.uniform(0.2, 2.0))
        x0, y0 = (float(v) for v in rng.uniform(-2, 2, 2).round(3))
        w, h = (float(v) for v in rng.uniform(0.3, 1.5, 2).round(3))
        r = rectangle(w, h)
        t = make_trajectory([make_piece(f"{a!r}*(x - {x0!r})^2 + {y0!r}", x0 - 2, x0 + 2)])
        points = [q for q in find_transitions(t, r) if q.finite]
        f = rg.compile(t, r, points)
        idx = [k for k, q in enumerate(points) if q.kind == SLOPE_TRANSITION]
        if len(idx) != 1 or abs(float(points[idx[0]].x) - x0) > 1e-9:
            out.failures.append(f"case {out.cases}: no notch at the vertex ({x0}, {y0})")
            out.cases += 1
            continue
        mutated = rg.drop_clause(f, rg.NOTCH, idx[0])
        xs = np.linspace(x0 - w, x0 + w, 61)
        ys = np.linspace(y0 - h, y0 + h, 61)
        inside = covered(r, np.array([[x0, y0]]), xs, ys)
        X, Y = np.meshgrid(xs, ys)
        lost = inside & ~rg.evaluate_grid(mutated, X, Y)
        if not lost.any():
            out.failures.append(f"case {out.cases}: dropping the vertex notch lost nothing")
        out.cases += 1
    return out


ALL = (
    translation_equivariance,
    reflection_equivariance,
    derivative_vs_difference,
    clamp_continuity,
    inflation_reduction,
    notch_mutation,
)
