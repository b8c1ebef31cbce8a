"""Brute-force reference for the unsafe region.

The trajectory is sampled densely and the polygon is placed at every sample;
a point is unsafe when some placement contains it.  This is slow and only
approximate between samples, which is why :func:`validate` tolerates
disagreement within a margin of the formula's boundary.

Sampling works on dyadic subintervals of each piece's parameter range, and
an interval is split while its chord exceeds the step.  A split decision
depends only on the interval and the step, so a finer step only ever adds
samples.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import region as rg
from .expr import DomainError
from .geometry import Polygon, point_in_polygon
from .trajectory import Piece, Trajectory, Y_OF_X
from .transitions import TransitionPoint, find_transitions

THREADS_ENV = "ACTIVECORNERS_THREADS"
BASE_LEVEL = 10
MAX_LEVEL = 48
BOUNDARY_EPS = 1e-12
CONTAIN_EPS = 1e-12


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationGrid:
    x0: float
    x1: float
    y0: float
    y1: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise OracleError(f"grid step must be positive, got {self.step}")
        if not (self.x1 >= self.x0 and self.y1 >= self.y0):
            raise OracleError(f"empty grid [{self.x0}, {self.x1}] x [{self.y0}, {self.y1}]")

    @classmethod
    def parse(cls, text: str) -> "ValidationGrid":
        """From ``"x0,x1,y0,y1,step"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise OracleError(f"grid needs x0,x1,y0,y1,step; got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as e:
            raise OracleError(f"bad grid {text!r}: {e}") from None

    @property
    def xs(self) -> np.ndarray:
        return _axis(self.x0, self.x1, self.step)

    @property
    def ys(self) -> np.ndarray:
        return _axis(self.y0, self.y1, self.step)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.ys), len(self.xs)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """(X, Y) arrays of shape (ny, nx)."""
        return np.meshgrid(self.xs, self.ys)


def _axis(a: float, b: float, step: float) -> np.ndarray:
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


@dataclass(frozen=True)
class OracleConfig:
    """``step`` is the maximum chord between consecutive trajectory samples.

    ``margin`` is the boundary margin; None means :func:`gap_margin` of the
    largest chord actually used, which bounds the uncovered gap between two
    consecutive placements.
    """

    step: float = 1e-3
    grid: Optional[ValidationGrid] = None
    margin: Optional[float] = None
    max_report: int = 20

    def __post_init__(self):
        if not self.step > 0:
            raise OracleError(f"trajectory step must be positive, got {self.step}")
        if self.margin is not None and self.margin < 0:
            raise OracleError(f"margin must be non-negative, got {self.margin}")


@dataclass
class ValidationReport:
    checked: int = 0
    oracle_unsafe: int = 0
    formula_unsafe: int = 0
    soundness_violations: int = 0
    completeness_violations: int = 0
    near_boundary: int = 0
    excluded_on_boundary: int = 0
    margin: float = 0.0
    samples: int = 0
    soundness_points: List[Tuple[float, float]] = field(default_factory=list)
    completeness_points: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.soundness_violations == 0 and self.completeness_violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["soundness_points"] = [list(p) for p in self.soundness_points]
        d["completeness_points"] = [list(p) for p in self.completeness_points]
        return d

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [
            f"{verdict}: {self.checked} grid points, {self.oracle_unsafe} oracle-unsafe, "
            f"{self.formula_unsafe} formula-unsafe",
            f"  soundness violations: {self.soundness_violations}",
            f"  completeness violations beyond margin {self.margin:.3g}: {self.completeness_violations}"
            f" ({self.near_boundary} within margin, {self.excluded_on_boundary} on an atom boundary)",
            f"  trajectory samples: {self.samples}",
        ]
        for p in self.soundness_points:
            lines.append(f"  unsound at ({p[0]:.6g}, {p[1]:.6g})")
        for p in self.completeness_points:
            lines.append(f"  incomplete at ({p[0]:.6g}, {p[1]:.6g})")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# trajectory sampling


def _piece_points(piece: Piece, s: np.ndarray) -> np.ndarray:
    v = piece.values(s)
    if piece.orientation == Y_OF_X:
        return np.stack([s, v], axis=1)
    return np.stack([v, s], axis=1)


def _param_window(piece: Piece, window) -> Optional[Tuple[float, float]]:
    lo, hi = float(piece.lo), float(piece.hi)
    if window is not None:
        x0, x1, y0, y1 = window
        a, b = (x0, x1) if piece.orientation == Y_OF_X else (y0, y1)
        lo, hi = max(lo, a), min(hi, b)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise OracleError("an unbounded piece needs a sampling window")
    if lo > hi:
        return None
    return lo, hi


def sample_piece(piece: Piece, step: float, window=None) -> Tuple[np.ndarray, float]:
    """Centers along one piece and the largest chord between neighbours."""
    rng = _param_window(piece, window)
    if rng is None:
        return np.zeros((0, 2)), 0.0
    lo, hi = rng
    if lo == hi:
        return _piece_points(piece, np.array([lo])), 0.0
    n = 2**BASE_LEVEL
    a = lo + (hi - lo) * np.arange(n) / n
    b = lo + (hi - lo) * np.arange(1, n + 1) / n
    b[-1] = hi
    leaves_a, leaves_b = [], []
    max_chord = 0.0
    for level in range(BASE_LEVEL, MAX_LEVEL + 1):
        pa, pb = _piece_points(piece, a), _piece_points(piece, b)
        chord = np.hypot(*(pb - pa).T)
        split = chord > step
        if level == MAX_LEVEL:
            split[:] = False
        keep = ~split
        leaves_a.append(a[keep])
        leaves_b.append(b[keep])
        if keep.any():
            max_chord = max(max_chord, float(chord[keep].max()))
        if not split.any():
            break
        m = 0.5 * (a[split] + b[split])
        a, b = np.concatenate([a[split], m]), np.concatenate([m, b[split]])
    s = np.unique(np.concatenate(leaves_a + leaves_b))
    return _piece_points(piece, s), max_chord


def sample_centers(
    t: Trajectory,
    p: Polygon,
    step: float,
    window=None,
    transitions: Optional[Sequence[TransitionPoint]] = None,
) -> Tuple[np.ndarray, float]:
    """All sampled centers (N, 2) and the largest chord used.

    ``window`` = (x0, x1, y0, y1) restricts sampling to centers whose polygon
    can reach that rectangle.  Transition placements are always included.
    """
    pad = None
    if window is not None:
        xr, yr = p.x_range, p.y_range
        pad = (
            window[0] - float(xr[1]) - step,
            window[1] - float(xr[0]) + step,
            window[2] - float(yr[1]) - step,
            window[3] - float(yr[0]) + step,
        )
    parts, max_chord = [], 0.0
    for piece in t.pieces:
        pts, c = sample_piece(piece, step, pad)
        parts.append(pts)
        max_chord = max(max_chord, c)
    if transitions is None:
        transitions = find_transitions(t, p)
    extra = [(float(q.x), float(q.y)) for q in transitions if q.finite]
    if extra:
        parts.append(np.array(extra, dtype=float))
    c = np.concatenate(parts) if parts else np.zeros((0, 2))
    if pad is not None and len(c):
        inside = (c[:, 0] >= pad[0]) & (c[:, 0] <= pad[1]) & (c[:, 1] >= pad[2]) & (c[:, 1] <= pad[3])
        c = c[inside]
    return c, max_chord


# ---------------------------------------------------------------------------
# containment on a grid


def _chord_bounds(p: Polygon, d: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vertical extent [lo, hi] of p at horizontal offsets d from its center."""
    lo = np.full(d.shape, -np.inf)
    hi = np.full(d.shape, np.inf)
    for k in range(p.n):
        vx, vy = (float(c) for c in p.vertex(k))
        ex_, ey = (float(c) for c in p.edge(k))
        if ex_ == 0:
            continue
        bound = vy + ey * (d - vx) / ex_
        if ex_ > 0:
            lo = np.maximum(lo, bound)
        else:
            hi = np.minimum(hi, bound)
    return lo, hi


def _column(p: Polygon, centers_sorted: np.ndarray, x: float, ys: np.ndarray) -> np.ndarray:
    xr = p.x_range
    left = np.searchsorted(centers_sorted[:, 0], x - float(xr[1]) - CONTAIN_EPS, side="left")
    right = np.searchsorted(centers_sorted[:, 0], x - float(xr[0]) + CONTAIN_EPS, side="right")
    out = np.zeros(ys.shape, dtype=bool)
    if right <= left:
        return out
    c = centers_sorted[left:right]
    d = np.clip(x - c[:, 0], float(xr[0]), float(xr[1]))
    lo, hi = _chord_bounds(p, d)
    start, end = c[:, 1] + lo, c[:, 1] + hi
    ok = end >= start
    start, end = start[ok], end[ok]
    if start.size == 0:
        return out
    order = np.argsort(start, kind="stable")
    start, end = start[order], np.maximum.accumulate(end[order])
    tol = CONTAIN_EPS * (1.0 + np.abs(ys))
    idx = np.searchsorted(start, ys + tol, side="right") - 1
    hit = idx >= 0
    out[hit] = end[idx[hit]] >= ys[hit] - tol[hit]
    return out


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise OracleError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


def covered(p: Polygon, centers: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Boolean (len(ys), len(xs)): grid point inside some placed polygon."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    order = np.argsort(centers[:, 0], kind="stable")
    cs = centers[order]
    out = np.zeros((len(ys), len(xs)), dtype=bool)

    def run(k):
        out[:, k] = _column(p, cs, float(xs[k]), ys)

    workers = _threads()
    if workers == 1 or len(xs) < 16:
        for k in range(len(xs)):
            run(k)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(len(xs))))
    return out


Parts = Union[Polygon, Sequence[Polygon]]


def min_interior_angle(p: Polygon) -> float:
    """Smallest interior angle of a convex polygon, in radians."""
    v = np.array([[float(a), float(b)] for a, b in p.vertices])
    e = np.roll(v, -1, axis=0) - v
    prev = -np.roll(e, 1, axis=0)
    cos = (e * prev).sum(1) / (np.linalg.norm(e, axis=1) * np.linalg.norm(prev, axis=1))
    return float(np.arccos(np.clip(cos, -1.0, 1.0)).min())


def gap_margin(parts: Sequence[Polygon], chord: float) -> float:
    """Margin covering the notch left between two placements ``chord`` apart.

    At a vertex with interior angle phi the notch is at most
    chord / (2 tan(phi / 2)) deep, so sharp vertices need more than the
    plain 2 * chord.
    """
    phi = min(min_interior_angle(p) for p in parts)
    return 2.0 * chord * max(1.0, 1.0 / (2.0 * math.tan(phi / 2.0)))


def _parts(p: Parts) -> List[Polygon]:
    parts = [p] if isinstance(p, Polygon) else list(p)
    if not parts:
        raise OracleError("object has no parts")
    return parts


def oracle_unsafe(t: Trajectory, p: Parts, q, cfg: Optional[OracleConfig] = None) -> bool:
    """Does some sampled placement of p (or of one of its parts) along t contain q?"""
    cfg = cfg or OracleConfig()
    qx, qy = float(q[0]), float(q[1])
    window = (qx, qx, qy, qy)
    for part in _parts(p):
        centers, _ = sample_centers(t, part, cfg.step, window)
        if any(point_in_polygon(part, (c[0], c[1]), (qx, qy)) for c in centers):
            return True
    return False


# ---------------------------------------------------------------------------
# validation


def _formula_mask(formula, X, Y) -> np.ndarray:
    try:
        return rg.evaluate_grid(formula, X, Y)
    except DomainError as e:
        raise OracleError(f"formula evaluation left its domain: {e}") from None


RING_DIRECTIONS = 256
RING_RADII = (1.0, 0.75, 0.5, 0.25, 0.1)


def _near_boundary(formula, pts: np.ndarray, margin: float) -> np.ndarray:
    """For each point, is some formula-safe point within ``margin`` of it?

    Probed on rings of several radii around each point.
    """
    ang = 2.0 * np.pi * np.arange(RING_DIRECTIONS) / RING_DIRECTIONS
    offs = np.concatenate([r * margin * np.stack([np.cos(ang), np.sin(ang)], axis=1) for r in RING_RADII])
    out = np.zeros(len(pts), dtype=bool)
    chunk = max(1, 200_000 // len(offs))
    for k in range(0, len(pts), chunk):
        block = pts[k:k + chunk]
        probe = block[:, None, :] + offs[None, :, :]
        inside = _formula_mask(formula, probe[..., 0], probe[..., 1])
        out[k:k + chunk] = ~inside.all(axis=1)
    return out


def validate(formula, t: Trajectory, p: Parts, cfg: OracleConfig) -> ValidationReport:
    """Compare ``formula`` with the sampling oracle on ``cfg.grid``.

    Soundness: no oracle-unsafe grid point may be formula-safe.  Completeness:
    a formula-unsafe, oracle-safe point is only tolerated when a formula-safe
    point lies within the margin.  Points where some atom is zero to 1e-12 are left
    out of both counts.  ``p`` may be a list of convex parts.
    """
    if cfg.grid is None:
        raise OracleError("validation needs a grid")
    g = cfg.grid
    xs, ys = g.xs, g.ys
    oracle = np.zeros((len(ys), len(xs)), dtype=bool)
    chord, samples = 0.0, 0
    for part in _parts(p):
        transitions = find_transitions(t, part)
        centers, c = sample_centers(t, part, cfg.step, (g.x0, g.x1, g.y0, g.y1), transitions)
        chord, samples = max(chord, c), samples + len(centers)
        oracle |= covered(part, centers, xs, ys)
    margin = cfg.margin if cfg.margin is not None else gap_margin(_parts(p), max(chord, cfg.step))
    X, Y = np.meshgrid(xs, ys)
    inside = _formula_mask(formula, X, Y)
    on_atom = rg.min_abs_atom(formula, X, Y) <= BOUNDARY_EPS

    rep = ValidationReport(checked=int(X.size), margin=margin, samples=int(samples))
    rep.oracle_unsafe = int(oracle.sum())
    rep.formula_unsafe = int(inside.sum())
    rep.excluded_on_boundary = int((on_atom & (oracle != inside)).sum())

    unsound = oracle & ~inside & ~on_atom
    rep.soundness_violations = int(unsound.sum())
    for r, c in list(zip(*np.nonzero(unsound)))[: cfg.max_report]:
        rep.soundness_points.append((float(X[r, c]), float(Y[r, c])))

    extra = inside & ~oracle & ~on_atom
    rows, cols = np.nonzero(extra)
    pts = np.stack([X[rows, cols], Y[rows, cols]], axis=1) if len(rows) else np.zeros((0, 2))
    near = _near_boundary(formula, pts, margin) if len(pts) else np.zeros(0, dtype=bool)
    rep.near_boundary = int(near.sum())
    rep.completeness_violations = int((~near).sum())
    for x, y in pts[~near][: cfg.max_report]:
        rep.completeness_points.append((float(x), float(y)))
    return rep
