"""Job files: a polygon, a trajectory and run settings in one JSON document.

Numbers may be given as JSON numbers or as constant expressions such as
``"5*sqrt(3)"``, ``"1/3"`` or ``"inf"``.  Names from the ``constants`` map may
be used in any expression, including trajectory functions.

Example::

    {
      "name": "fig1",
      "constants": {"w": 2, "h": 1},
      "polygon": {"rectangle": ["w", "h"]},
      "trajectory": {
        "domain": [0, "inf"],
        "pieces": [
          {"f": "-2*x", "domain": [0, 5]},
          {"f": "x - 15", "domain": [5, "inf"]}
        ]
      },
      "validation": {"grid": [-5, 20, -12, 5, 0.25], "step": 0.001},
      "plot": {"window": [-5, 20, -12, 5]}
    }

A polygon is one of ``{"vertices": [[x, y], ...]}``, ``{"rectangle": [w, h]}``,
``{"regular_ngon": {"n": 6, "inscribed_radius": r, "rotation": deg}}`` (or
``"circumradius"`` instead of ``"inscribed_radius"``) or
``{"union": [polygon, ...]}`` for an object made of convex parts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from . import expr as ex
from . import geometry as geo
from . import region as rg
from .oracle import OracleConfig, ValidationGrid
from .trajectory import ORIENTATIONS, Y_OF_X, Piece, Trajectory, TrajectoryError, make_trajectory

BUILTIN = ("fig1", "acas", "uav", "dubins")
FORMATS = ("json", "latex", "cas")


class JobError(ValueError):
    """Bad job file; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class JobSpec:
    name: str
    parts: List[geo.Polygon]
    trajectory: Trajectory
    obstacle: Optional[geo.Polygon] = None
    grid: Optional[ValidationGrid] = None
    step: float = 1e-3
    margin: Optional[float] = None
    formats: Tuple[str, ...] = ("json",)
    window: Optional[Tuple[float, float, float, float]] = None
    plot_step: Optional[float] = None
    constants: Dict[str, ex.Number] = field(default_factory=dict)

    @property
    def polygon(self) -> geo.Polygon:
        """The single convex object (after inflation); unions have no single polygon."""
        if len(self.objects) != 1:
            raise JobError("polygon", "object is a union of several parts")
        return self.objects[0]

    @property
    def objects(self) -> List[geo.Polygon]:
        """Convex parts, each grown by the obstacle when one is given."""
        if self.obstacle is None:
            return list(self.parts)
        return [geo.inflate(p, self.obstacle) for p in self.parts]

    def compile(self) -> rg.RegionFormula:
        return rg.union([rg.compile(self.trajectory, p) for p in self.objects])

    def oracle_config(self, grid: Optional[ValidationGrid] = None, margin: Optional[float] = None) -> OracleConfig:
        g = grid or self.grid
        return OracleConfig(step=self.step, grid=g, margin=self.margin if margin is None else margin)


# ---------------------------------------------------------------------------
# field readers


def _number(v, path: str, constants) -> ex.Number:
    if isinstance(v, bool) or v is None:
        raise JobError(path, f"expected a number, got {v!r}")
    try:
        return ex.parse_number(v if not isinstance(v, str) else v.strip(), constants)
    except (ex.ExprError, TypeError) as e:
        raise JobError(path, str(e)) from None


def _float(v, path: str, constants) -> float:
    x = float(_number(v, path, constants))
    if not math.isfinite(x):
        raise JobError(path, f"must be finite, got {v!r}")
    return x


def _obj(d, path: str) -> dict:
    if not isinstance(d, dict):
        raise JobError(path, f"expected an object, got {type(d).__name__}")
    return d


def _list(d, path: str, n: Optional[int] = None) -> list:
    if not isinstance(d, list):
        raise JobError(path, f"expected a list, got {type(d).__name__}")
    if n is not None and len(d) != n:
        raise JobError(path, f"expected {n} entries, got {len(d)}")
    return d


def _constants(raw, path="constants") -> Dict[str, ex.Number]:
    out: Dict[str, ex.Number] = {}
    for k, v in _obj(raw, path).items():
        if not k.isidentifier() or k in ("x", "y", "pi", "inf"):
            raise JobError(f"{path}.{k}", "not a usable constant name")
        # earlier constants may be used by later ones
        out[k] = _number(v, f"{path}.{k}", out)
    return out


def _polygon(raw, path: str, constants) -> List[geo.Polygon]:
    d = _obj(raw, path)
    keys = [k for k in ("vertices", "rectangle", "regular_ngon", "union") if k in d]
    if len(keys) != 1:
        raise JobError(path, "give exactly one of vertices, rectangle, regular_ngon, union")
    key = keys[0]
    sub = f"{path}.{key}"
    try:
        if key == "vertices":
            pts = []
            for i, v in enumerate(_list(d[key], sub)):
                v = _list(v, f"{sub}[{i}]", 2)
                pts.append((_number(v[0], f"{sub}[{i}][0]", constants), _number(v[1], f"{sub}[{i}][1]", constants)))
            return [geo.make_polygon(pts)]
        if key == "rectangle":
            w, h = _list(d[key], sub, 2)
            return [geo.rectangle(_number(w, f"{sub}[0]", constants), _number(h, f"{sub}[1]", constants))]
        if key == "regular_ngon":
            g = _obj(d[key], sub)
            n = g.get("n")
            if not isinstance(n, int) or isinstance(n, bool):
                raise JobError(f"{sub}.n", f"expected an integer, got {n!r}")
            rot = _number(g.get("rotation", 0), f"{sub}.rotation", constants)
            if ("inscribed_radius" in g) == ("circumradius" in g):
                raise JobError(sub, "give exactly one of inscribed_radius, circumradius")
            if "inscribed_radius" in g:
                r = _number(g["inscribed_radius"], f"{sub}.inscribed_radius", constants)
                return [geo.regular_ngon(n, r, rot)]
            r = _number(g["circumradius"], f"{sub}.circumradius", constants)
            return [geo.regular_ngon_circumradius(n, r, rot)]
        parts = []
        for i, part in enumerate(_list(d[key], sub)):
            parts.extend(_polygon(part, f"{sub}[{i}]", constants))
        if not parts:
            raise JobError(sub, "union needs at least one part")
        return parts
    except geo.GeometryError as e:
        raise JobError(sub, str(e)) from None


def _trajectory(raw, path: str, constants) -> Trajectory:
    d = _obj(raw, path)
    pieces = []
    for i, pr in enumerate(_list(d.get("pieces"), f"{path}.pieces")):
        pp = f"{path}.pieces[{i}]"
        pr = _obj(pr, pp)
        orient = pr.get("orientation", Y_OF_X)
        if orient not in ORIENTATIONS:
            raise JobError(f"{pp}.orientation", f"must be one of {ORIENTATIONS}")
        if not isinstance(pr.get("f"), str):
            raise JobError(f"{pp}.f", "expected an expression string")
        var = "x" if orient == Y_OF_X else "y"
        try:
            f = ex.parse(pr["f"], variables=(var,), constants=constants)
        except ex.ExprError as e:
            raise JobError(f"{pp}.f", str(e)) from None
        lo, hi = _list(pr.get("domain"), f"{pp}.domain", 2)
        try:
            pieces.append(Piece(f, _number(lo, f"{pp}.domain[0]", constants),
                                _number(hi, f"{pp}.domain[1]", constants), orient))
        except TrajectoryError as e:
            raise JobError(pp, str(e)) from None
    if not pieces:
        raise JobError(f"{path}.pieces", "at least one piece is required")
    domain = None
    if "domain" in d:
        lo, hi = _list(d["domain"], f"{path}.domain", 2)
        domain = (_number(lo, f"{path}.domain[0]", constants), _number(hi, f"{path}.domain[1]", constants))
    try:
        return make_trajectory(pieces, domain)
    except TrajectoryError as e:
        raise JobError(path, str(e)) from None


def parse_job(raw: Any, name: str = "job") -> JobSpec:
    d = _obj(raw, "job")
    known = {"name", "constants", "polygon", "obstacle", "trajectory", "validation", "outputs", "plot", "description"}
    unknown = sorted(set(d) - known)
    if unknown:
        raise JobError(unknown[0], "unknown field")
    constants = _constants(d.get("constants", {}))
    if "polygon" not in d:
        raise JobError("polygon", "missing")
    if "trajectory" not in d:
        raise JobError("trajectory", "missing")
    parts = _polygon(d["polygon"], "polygon", constants)
    obstacle = None
    if "obstacle" in d:
        obs = _polygon(d["obstacle"], "obstacle", constants)
        if len(obs) != 1:
            raise JobError("obstacle", "must be a single convex polygon")
        obstacle = obs[0]
    traj = _trajectory(d["trajectory"], "trajectory", constants)
    spec = JobSpec(str(d.get("name", name)), parts, traj, obstacle, constants=constants)

    if "validation" in d:
        v = _obj(d["validation"], "validation")
        if "grid" in v:
            g = _list(v["grid"], "validation.grid", 5)
            vals = [_float(x, f"validation.grid[{i}]", constants) for i, x in enumerate(g)]
            try:
                spec.grid = ValidationGrid(*vals)
            except ValueError as e:
                raise JobError("validation.grid", str(e)) from None
        if "step" in v:
            spec.step = _float(v["step"], "validation.step", constants)
            if spec.step <= 0:
                raise JobError("validation.step", "must be positive")
        if v.get("margin") is not None:
            spec.margin = _float(v["margin"], "validation.margin", constants)
            if spec.margin < 0:
                raise JobError("validation.margin", "must be non-negative")
    if "outputs" in d:
        outs = _list(d["outputs"], "outputs")
        for i, o in enumerate(outs):
            if o not in FORMATS:
                raise JobError(f"outputs[{i}]", f"must be one of {FORMATS}")
        spec.formats = tuple(dict.fromkeys(["json"] + outs))
    if "plot" in d:
        pl = _obj(d["plot"], "plot")
        if "window" in pl:
            w = _list(pl["window"], "plot.window", 4)
            spec.window = tuple(_float(x, f"plot.window[{i}]", constants) for i, x in enumerate(w))
        if "step" in pl:
            spec.plot_step = _float(pl["step"], "plot.step", constants)
    return spec


def load_job(path: Union[str, Path]) -> JobSpec:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise JobError("job", f"not valid JSON: {e}") from None
    return parse_job(raw, path.name.split(".")[0])


def builtin_path(name: str):
    """Traversable for a built-in job (``fig1``, ``acas``, ``uav``, ``dubins``)."""
    return resources.files("activecorners") / "instances" / f"{name}.job"


def builtin_job(name: str) -> JobSpec:
    if name not in BUILTIN:
        raise JobError("name", f"no built-in job {name!r}; choose from {BUILTIN}")
    return parse_job(json.loads(builtin_path(name).read_text()), name)
