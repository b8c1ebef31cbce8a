"""Plain SVG picture of a region: shaded unsafe cells, the dashed trajectory
and the polygon at each transition point.  Output is byte-for-byte
deterministic for the same inputs."""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import region as rg
from .geometry import Polygon
from .oracle import sample_piece
from .trajectory import Trajectory
from .transitions import find_transitions

WIDTH = 800
FILL = "#d9534f"
TRAJ = "#1f4e9c"
NOTCH = "#333333"


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _runs(row: np.ndarray) -> List[Tuple[int, int]]:
    """(start, length) of each run of True in a boolean row."""
    padded = np.concatenate([[False], row, [False]]).astype(np.int8)
    d = np.diff(padded)
    starts = np.nonzero(d == 1)[0]
    ends = np.nonzero(d == -1)[0]
    return list(zip(starts.tolist(), (ends - starts).tolist()))


def render_svg(
    formula: rg.Node,
    t: Trajectory,
    parts: Sequence[Polygon],
    window: Sequence[float],
    cell: Optional[float] = None,
) -> str:
    x0, x1, y0, y1 = (float(v) for v in window)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"empty plot window {tuple(window)}")
    cell = cell or (x1 - x0) / 400.0
    scale = WIDTH / (x1 - x0)
    height = (y1 - y0) * scale

    def px(x, y):
        return (x - x0) * scale, (y1 - y) * scale

    nx = max(1, int(math.ceil((x1 - x0) / cell)))
    ny = max(1, int(math.ceil((y1 - y0) / cell)))
    xs = x0 + (np.arange(nx) + 0.5) * cell
    ys = y1 - (np.arange(ny) + 0.5) * cell
    X, Y = np.meshgrid(xs, ys)
    mask = rg.evaluate_grid(formula, X, Y)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(WIDTH)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(WIDTH)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(WIDTH)}" height="{_fmt(height)}" fill="white"/>',
        f'<g fill="{FILL}" fill-opacity="0.45" shape-rendering="crispEdges">',
    ]
    cpx = cell * scale
    for r in range(ny):
        for start, length in _runs(mask[r]):
            out.append(
                f'<rect x="{_fmt(start * cpx)}" y="{_fmt(r * cpx)}" '
                f'width="{_fmt(length * cpx)}" height="{_fmt(cpx)}"/>'
            )
    out.append("</g>")

    # axes through the origin when visible
    if x0 <= 0 <= x1:
        a, _ = px(0, 0)
        out.append(f'<line x1="{_fmt(a)}" y1="0" x2="{_fmt(a)}" y2="{_fmt(height)}" stroke="#999" stroke-width="0.5"/>')
    if y0 <= 0 <= y1:
        _, b = px(0, 0)
        out.append(f'<line x1="0" y1="{_fmt(b)}" x2="{_fmt(WIDTH)}" y2="{_fmt(b)}" stroke="#999" stroke-width="0.5"/>')

    # trajectory, sampled per piece inside a padded window
    pad = 0.05 * max(x1 - x0, y1 - y0)
    box = (x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    for piece in t.pieces:
        pts, _ = sample_piece(piece, (x1 - x0) / 200.0, box)
        if len(pts) < 2:
            continue
        path = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(x, y) for x, y in pts))
        out.append(
            f'<polyline points="{path}" fill="none" stroke="{TRAJ}" stroke-width="1.5" stroke-dasharray="6 4"/>'
        )

    for part in parts:
        for q in find_transitions(t, part):
            if not q.finite:
                continue
            cx, cy = float(q.x), float(q.y)
            pts = " ".join(
                f"{_fmt(a)},{_fmt(b)}"
                for a, b in (px(cx + float(v[0]), cy + float(v[1])) for v in part.vertices)
            )
            out.append(f'<polygon points="{pts}" fill="none" stroke="{NOTCH}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
