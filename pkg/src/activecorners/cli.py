"""Command line: ``activecorners compile|eval|validate|plot|examples``.

A job argument is a path to a job file or the name of a built-in job
(fig1, acas, uav, dubins).  Exit status is 0 on success, 1 for an UNSAFE
verdict or a failed validation, and 2 for any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from . import expr as ex
from . import region as rg
from .jobs import BUILTIN, FORMATS, JobError, JobSpec, builtin_job, load_job
from .oracle import OracleError, ValidationGrid, validate
from .plot import render_svg
from .serialize import SerializeError, from_json, serialize
from .trajectory import TrajectoryError
from .transitions import TransitionError

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

SUFFIX = {"json": ".region.json", "latex": ".tex", "cas": ".m"}

_ERRORS = (JobError, ex.ExprError, OracleError, SerializeError, TrajectoryError,
           TransitionError, rg.RegionError, ValueError, OSError)


class CliError(Exception):
    pass


def resolve_job(arg: str) -> JobSpec:
    path = Path(arg)
    if path.is_file():
        return load_job(path)
    if arg in BUILTIN:
        return builtin_job(arg)
    raise CliError(f"{arg}: no such job file or built-in job ({', '.join(BUILTIN)})")


def _formats(job: JobSpec, requested: Optional[List[str]]) -> List[str]:
    if not requested:
        return list(job.formats)
    out = ["json"]
    for item in requested:
        for f in item.split(","):
            f = f.strip()
            if f not in FORMATS:
                raise CliError(f"--format: unknown format {f!r}; choose from {', '.join(FORMATS)}")
            if f not in out:
                out.append(f)
    return out


def _window(job: JobSpec):
    if job.window is not None:
        return job.window
    if job.grid is not None:
        g = job.grid
        return (g.x0, g.x1, g.y0, g.y1)
    return None


def write_artifacts(job: JobSpec, formula, outdir: Path, formats: Sequence[str]) -> List[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        kw = {}
        if fmt == "json":
            kw["meta"] = {"job": job.name}
        elif fmt == "cas":
            kw["window"] = _window(job)
        path = outdir / f"{job.name}{SUFFIX[fmt]}"
        path.write_text(serialize(formula, fmt, **kw))
        written.append(path)
    return written


def _validate_job(job: JobSpec, formula, grid=None, margin=None):
    cfg = job.oracle_config(grid=grid, margin=margin)
    if cfg.grid is None:
        raise CliError(f"{job.name}: no validation grid; give --grid x0,x1,y0,y1,step")
    return validate(formula, job.trajectory, job.objects, cfg)


# ---------------------------------------------------------------------------
# commands


def cmd_compile(args) -> int:
    job = resolve_job(args.job)
    t0 = time.perf_counter()
    formula = job.compile()
    dt = time.perf_counter() - t0
    paths = write_artifacts(job, formula, Path(args.output), _formats(job, args.format))
    n_seg = len(rg.clauses(formula, rg.SEGMENT))
    n_notch = len(rg.clauses(formula, rg.NOTCH))
    print(f"{job.name}: {n_seg} segment clauses, {n_notch} notch clauses, compiled in {dt:.3f} s")
    for p in paths:
        print(f"  wrote {p}")
    return EXIT_OK


def _load_region(arg: str):
    path = Path(arg)
    if path.is_file() and not path.name.endswith(".job"):
        return from_json(path.read_text())
    return resolve_job(arg).compile()


def cmd_eval(args) -> int:
    formula = _load_region(args.region)
    try:
        q = (ex.parse_number(args.x), ex.parse_number(args.y))
    except ex.ExprError as e:
        raise CliError(f"bad point: {e}") from None
    unsafe = rg.evaluate(formula, q)
    print("UNSAFE" if unsafe else "SAFE")
    return EXIT_FAIL if unsafe else EXIT_OK


def cmd_validate(args) -> int:
    job = resolve_job(args.job)
    grid = ValidationGrid.parse(args.grid) if args.grid else None
    formula = from_json(Path(args.region).read_text()) if args.region else job.compile()
    rep = _validate_job(job, formula, grid, args.margin)
    print(f"{job.name}: {rep.summary()}")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{job.name}.validation.json"
    path.write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
    print(f"  wrote {path}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_plot(args) -> int:
    job = resolve_job(args.job)
    window = _window(job)
    if args.window:
        parts = args.window.split(",")
        if len(parts) != 4:
            raise CliError("--window needs x0,x1,y0,y1")
        window = tuple(float(v) for v in parts)
    if window is None:
        raise CliError(f"{job.name}: no plot window; give --window x0,x1,y0,y1")
    svg = render_svg(job.compile(), job.trajectory, job.objects, window, job.plot_step)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_examples(args) -> int:
    names = list(BUILTIN) if args.all or not args.names else args.names
    status = EXIT_OK
    for name in names:
        if name not in BUILTIN:
            raise CliError(f"{name}: not a built-in job ({', '.join(BUILTIN)})")
        job = builtin_job(name)
        t0 = time.perf_counter()
        formula = job.compile()
        dt = time.perf_counter() - t0
        if args.output:
            write_artifacts(job, formula, Path(args.output), job.formats)
        rep = _validate_job(job, formula)
        verdict = "PASS" if rep.passed else "FAIL"
        print(f"{verdict} {name}: compile {dt:.3f} s, {rep.checked} grid points, "
              f"{rep.soundness_violations} unsound, {rep.completeness_violations} incomplete")
        if not rep.passed:
            status = EXIT_FAIL
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="activecorners", description="Compile safe-region formulas for a polygon moving along a piecewise trajectory.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a job to formula files")
    p.add_argument("job")
    p.add_argument("-o", "--output", default=".", help="output directory (default: .)")
    p.add_argument("--format", action="append", help="json, latex or cas; repeat or comma-separate")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("eval", help="classify one obstacle point")
    p.add_argument("region", help="a .region.json file, a job file or a built-in job")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate", help="check a compiled formula against the sampling oracle")
    p.add_argument("job")
    p.add_argument("--grid", help="x0,x1,y0,y1,step")
    p.add_argument("--margin", type=float, help="boundary margin (default: derived from the sample chord and the sharpest vertex)")
    p.add_argument("--region", help="validate this .region.json instead of compiling the job")
    p.add_argument("-o", "--output", default=".", help="directory for the report (default: .)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plot", help="draw the region as SVG")
    p.add_argument("job")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("examples", help="compile and validate built-in jobs")
    p.add_argument("names", nargs="*", help=f"built-in jobs ({', '.join(BUILTIN)})")
    p.add_argument("--all", action="store_true")
    p.add_argument("-o", "--output", help="also write artifacts here")
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.func(args)
    except (CliError, *_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
