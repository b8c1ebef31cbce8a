"""Safe regions for a convex polygon moving along a piecewise trajectory.

The unsafe set of obstacle positions is compiled into a quantifier-free
formula built from the polygon's active corners; a sampling oracle checks
the result.
"""

from .expr import ExprError, ParseError, differentiate, evaluate as evaluate_expr, parse, to_str
from .geometry import (
    ActivePair,
    GeometryError,
    Polygon,
    active_corners,
    inflate,
    make_polygon,
    point_in_polygon,
    rectangle,
    regular_ngon,
    regular_ngon_circumradius,
)
from .jobs import JobError, JobSpec, builtin_job, load_job, parse_job
from .oracle import OracleConfig, ValidationGrid, ValidationReport, oracle_unsafe, validate
from .region import RegionFormula, compile, evaluate, evaluate_grid, union
from .serialize import from_json, serialize, to_cas, to_json, to_latex
from .trajectory import Piece, Trajectory, TrajectoryError, clamp, eval_traj, make_piece, make_trajectory
from .transitions import TransitionPoint, build_segments, find_transitions

__version__ = "0.1.0"
