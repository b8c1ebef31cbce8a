"""Piecewise trajectories built from explicit functions.

Each piece is either ``y = f(x)`` or ``x = f(y)`` on an interval of its own
parameter.  The parameter is called ``s`` below: it is ``x`` for the first
orientation and ``y`` for the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .expr import DomainError, Expr, Number, _num

Y_OF_X = "y_of_x"
X_OF_Y = "x_of_y"
ORIENTATIONS = (Y_OF_X, X_OF_Y)

# interior samples used to check that f and f' are finite
CHECK_SAMPLES = 513


class TrajectoryError(ValueError):
    pass


def param_var(orientation: str) -> str:
    return "x" if orientation == Y_OF_X else "y"


def _bound(v) -> Number:
    v = _num(v)
    if isinstance(v, float) and math.isnan(v):
        raise TrajectoryError("NaN domain bound")
    return v


def unit_to_param(t: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Map t in [0, 1] onto [lo, hi], with x = a + t/(1-t) style stretching for infinite ends."""
    t = np.asarray(t, dtype=float)
    if math.isfinite(lo) and math.isfinite(hi):
        return lo + (hi - lo) * t
    with np.errstate(divide="ignore"):
        if math.isfinite(lo):
            return lo + t / (1.0 - t)
        if math.isfinite(hi):
            return hi - (1.0 - t) / t
        u = 2.0 * t - 1.0
        return u / (1.0 - u * u)


@dataclass(frozen=True)
class Piece:
    """One C1 piece: ``y = f(x)`` (orientation ``y_of_x``) or ``x = f(y)``."""

    f: Expr
    lo: Number
    hi: Number
    orientation: str = Y_OF_X
    df: Expr = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise TrajectoryError(f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}")
        object.__setattr__(self, "lo", _bound(self.lo))
        object.__setattr__(self, "hi", _bound(self.hi))
        if not self.lo < self.hi:
            raise TrajectoryError(f"empty subdomain [{self.lo}, {self.hi}]")
        extra = ex.free_vars(self.f) - {self.var}
        if extra:
            raise TrajectoryError(f"piece uses variables {sorted(extra)}; expected only {self.var!r}")
        object.__setattr__(self, "df", ex.differentiate(self.f, self.var))

    @property
    def var(self) -> str:
        return param_var(self.orientation)

    @property
    def finite_lo(self) -> bool:
        return math.isfinite(self.lo)

    @property
    def finite_hi(self) -> bool:
        return math.isfinite(self.hi)

    def __call__(self, s) -> Number:
        return ex.evaluate(self.f, s, self.var)

    def slope(self, s) -> Number:
        return ex.evaluate(self.df, s, self.var)

    def values(self, s: np.ndarray) -> np.ndarray:
        return ex.evaluate_array(self.f, {self.var: s})

    def slopes(self, s: np.ndarray) -> np.ndarray:
        return ex.evaluate_array(self.df, {self.var: s})

    def point(self, s) -> Tuple[Number, Number]:
        """Plane coordinates (x, y) of the center at parameter s."""
        v = self(s)
        return (s, v) if self.orientation == Y_OF_X else (v, s)

    def tangent(self, s) -> Tuple[Number, Number]:
        """Motion direction (dx, dy), oriented with increasing parameter."""
        d = self.slope(s)
        return (1, d) if self.orientation == Y_OF_X else (d, 1)

    def contains(self, s) -> bool:
        return self.lo <= s <= self.hi

    def swapped(self) -> "Piece":
        """Same curve described with the axes exchanged."""
        other = X_OF_Y if self.orientation == Y_OF_X else Y_OF_X
        f = ex.rename(self.f, {self.var: param_var(other)})
        return Piece(f, self.lo, self.hi, other)

    def translated(self, a, b) -> "Piece":
        """Curve moved by (a, b) in the plane."""
        da, db = (a, b) if self.orientation == Y_OF_X else (b, a)
        shifted = ex.substitute(self.f, {self.var: ex.Var(self.var) - da}) + db
        return Piece(shifted, self.lo + _num(da), self.hi + _num(da), self.orientation)

    def mirrored_x(self) -> "Piece":
        """Reflection across the y axis."""
        if self.orientation == Y_OF_X:
            f = ex.substitute(self.f, {"x": -ex.Var("x")})
            return Piece(f, -self.hi, -self.lo, Y_OF_X)
        return Piece(-self.f, self.lo, self.hi, X_OF_Y)

    def check(self, samples: int = CHECK_SAMPLES) -> None:
        """Dense-sampling C1 check; raises TrajectoryError on failure.

        Finite endpoints must have a finite value.  The derivative is only
        sampled inside, so a vertical tangent exactly at an end is allowed.
        """
        for end in (self.lo, self.hi):
            if math.isfinite(end):
                try:
                    v = float(self(end))
                except DomainError as e:
                    raise TrajectoryError(f"f undefined at endpoint {self.var}={end}: {e}") from None
                if not math.isfinite(v):
                    raise TrajectoryError(f"f not finite at endpoint {self.var}={end}")
        t = (np.arange(samples) + 0.5) / samples
        s = unit_to_param(t, float(self.lo), float(self.hi))
        try:
            v = self.values(s)
            d = self.slopes(s)
        except DomainError as e:
            raise TrajectoryError(f"f or f' undefined inside [{self.lo}, {self.hi}]: {e}") from None
        bad = ~(np.isfinite(v) & np.isfinite(d))
        if bad.any():
            raise TrajectoryError(f"f or f' not finite near {self.var}={s[bad][0]:.6g}")


def make_piece(f, lo, hi, orientation: str = Y_OF_X, constants=None) -> Piece:
    """Build and check a piece; ``f`` and the bounds may be expression strings."""
    lo, hi = (ex.parse_number(b, constants) if isinstance(b, str) else b for b in (lo, hi))
    if isinstance(f, str):
        f = ex.parse(f, variables=(param_var(orientation),), constants=constants)
    p = Piece(f, lo, hi, orientation)
    p.check()
    return p


@dataclass(frozen=True)
class Trajectory:
    pieces: Tuple[Piece, ...]
    domain: Optional[Tuple[Number, Number]] = None

    @property
    def mixed(self) -> bool:
        return len({p.orientation for p in self.pieces}) > 1

    @property
    def orientation(self) -> Optional[str]:
        return None if self.mixed else self.pieces[0].orientation

    def swapped(self) -> "Trajectory":
        return Trajectory(tuple(p.swapped() for p in self.pieces), self.domain)

    def translated(self, a, b) -> "Trajectory":
        dom = self.domain
        if dom is not None and self.orientation is not None:
            shift = _num(a) if self.orientation == Y_OF_X else _num(b)
            dom = (dom[0] + shift, dom[1] + shift)
        return Trajectory(tuple(p.translated(a, b) for p in self.pieces), dom)

    def mirrored_x(self) -> "Trajectory":
        pieces = [p.mirrored_x() for p in self.pieces]
        dom = self.domain
        if self.orientation == Y_OF_X:
            pieces.reverse()
            if dom is not None:
                dom = (-dom[1], -dom[0])
        return Trajectory(tuple(pieces), dom)


def make_trajectory(pieces: Sequence[Piece], domain=None) -> Trajectory:
    """Validate a piece list.

    Pieces of a single orientation are sorted and must tile ``domain`` (or
    their own hull when no domain is given) without overlap or gap.  When
    both orientations occur the pieces are taken in the given order and no
    tiling check applies, as their parameters live on different axes.
    """
    pieces = list(pieces)
    if not pieces:
        raise TrajectoryError("trajectory has no pieces")
    for k, p in enumerate(pieces):
        try:
            p.check()
        except TrajectoryError as e:
            raise TrajectoryError(f"piece {k}: {e}") from None
    if len({p.orientation for p in pieces}) > 1:
        return Trajectory(tuple(pieces), None)
    pieces.sort(key=lambda p: p.lo)
    for a, b in zip(pieces, pieces[1:]):
        if b.lo < a.hi:
            raise TrajectoryError(f"overlapping subdomains [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}]")
        if b.lo > a.hi:
            raise TrajectoryError(f"gap in coverage between {a.hi} and {b.lo}")
    hull = (pieces[0].lo, pieces[-1].hi)
    if domain is not None:
        d0, d1 = _bound(domain[0]), _bound(domain[1])
        if d0 < hull[0] or d1 > hull[1]:
            lo_gap = (d0, hull[0]) if d0 < hull[0] else (hull[1], d1)
            raise TrajectoryError(f"gap in coverage: [{lo_gap[0]}, {lo_gap[1]}] has no piece")
        if d0 > hull[0] or d1 < hull[1]:
            raise TrajectoryError(f"pieces extend beyond the declared domain [{d0}, {d1}]")
    return Trajectory(tuple(pieces), hull)


def _owners(t: Trajectory, s) -> List[Piece]:
    if t.mixed:
        raise TrajectoryError("point evaluation needs a single-orientation trajectory")
    owners = [p for p in t.pieces if p.contains(s)]
    if not owners:
        raise TrajectoryError(f"{t.pieces[0].var}={s} is outside the domain {t.domain}")
    return owners


def eval_traj(t: Trajectory, s) -> Number:
    """Value of the owning piece; at a shared boundary the left piece wins."""
    return _owners(t, s)[0](s)


def eval_traj_both(t: Trajectory, s) -> Tuple[Number, Number]:
    """(left limit, right limit) at s; equal away from piece boundaries."""
    owners = _owners(t, s)
    return owners[0](s), owners[-1](s)


@dataclass(frozen=True)
class ClampedPiece:
    """f held constant outside [lo, hi]: g(s) = f(min(max(s, lo), hi)).

    An infinite bound means that side is not clamped.
    """

    base: Piece
    lo: Number
    hi: Number

    def __call__(self, s) -> Number:
        s = _num(s)
        if math.isfinite(self.lo) and s < self.lo:
            s = self.lo
        if math.isfinite(self.hi) and s > self.hi:
            s = self.hi
        return self.base(s)

    def values(self, s: np.ndarray) -> np.ndarray:
        return self.base.values(np.clip(s, float(self.lo), float(self.hi)))

    def expr_at(self, arg: Expr) -> Expr:
        """Expression for g(arg) with the clamp made explicit."""
        c = ex.clamp(arg, self.lo, self.hi)
        return ex.substitute(self.base.f, {self.base.var: c})


def clamp(p: Piece, interval) -> ClampedPiece:
    lo, hi = _bound(interval[0]), _bound(interval[1])
    if lo > hi:
        raise TrajectoryError(f"clamp interval [{lo}, {hi}] is reversed")
    if lo < p.lo or hi > p.hi:
        raise TrajectoryError(f"clamp interval [{lo}, {hi}] is outside the subdomain [{p.lo}, {p.hi}]")
    return ClampedPiece(p, lo, hi)
