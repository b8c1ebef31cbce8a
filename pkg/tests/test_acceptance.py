"""Acceptance criteria 1-6.  Each test prints one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

import properties
from reference import fig1_unsafe, uav_unsafe
from activecorners import builtin_job
from activecorners import region as rg
from activecorners.geometry import active_corners, regular_ngon_circumradius
from activecorners.oracle import OracleConfig, ValidationGrid, validate
from activecorners.transitions import build_segments, find_transitions

PROBE = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def _grid(x0, x1, y0, y1, step):
    xs = x0 + step * np.arange(int(round((x1 - x0) / step)) + 1)
    ys = y0 + step * np.arange(int(round((y1 - y0) / step)) + 1)
    return np.meshgrid(xs, ys)


def _agreement(formula, ref, X, Y, eps):
    """Compare off the boundary: points whose verdict flips within eps are left out."""
    a = rg.evaluate_grid(formula, X, Y)
    b = ref(X, Y)
    near = np.zeros(a.shape, dtype=bool)
    for dx, dy in PROBE:
        near |= rg.evaluate_grid(formula, X + eps * dx, Y + eps * dy) != a
        near |= ref(X + eps * dx, Y + eps * dy) != b
    return int((~near).sum()), int(((a != b) & ~near).sum())


def test_criterion_1_fig1_matches_reference(report):
    job = builtin_job("fig1")
    t0 = time.perf_counter()
    f = job.compile()
    X, Y = _grid(-5, 20, -12, 5, 0.25)
    compared, wrong = _agreement(f, fig1_unsafe, X, Y, 1e-9)
    dt = time.perf_counter() - t0
    ok = wrong == 0 and compared > 0.95 * X.size and dt < 5
    report(1, ok, f"fig1 vs reference on {X.size} points: {compared} compared, {wrong} disagree, {dt:.2f} s")


PAIRINGS = {  # 1-based vertex pairs and the motion angles where they are active
    frozenset({1, 4}): (0, 60),
    frozenset({2, 5}): (60, 120),
    frozenset({3, 6}): (120, 180),
}


def test_criterion_2_hexagon_table(report):
    hexagon = regular_ngon_circumradius(6, 2, -60)
    bad = []
    for theta in range(180):
        got = {frozenset({p.i + 1, p.j + 1}) for p in active_corners(hexagon, theta)}
        listed = {pair for pair, (lo, hi) in PAIRINGS.items() if lo <= theta <= hi or theta == hi - 180}
        # at a side angle both neighbouring pairings hold; off them exactly one
        if len(listed) == 1:
            ok = got == listed
        else:
            ok = listed <= got and set().union(*got) == set().union(*listed)
        if not ok:
            bad.append(theta)
    report(2, not bad, f"hexagon active pairs at 180 angles, {len(bad)} mismatches {bad[:5]}")


def test_criterion_3_uav(report):
    job = builtin_job("uav")
    t0 = time.perf_counter()
    f = job.compile()
    dt = time.perf_counter() - t0
    X, Y = _grid(-20, 16, -6, 16, 0.25)
    compared, wrong = _agreement(f, uav_unsafe, X, Y, 1e-6)
    grid = ValidationGrid(-20, 16, -6, 16, 0.1)
    rep = validate(f, job.trajectory, job.polygon, OracleConfig(step=1e-3, grid=grid))
    ok = wrong == 0 and compared > 0.95 * X.size and rep.passed and dt < 5
    report(3, ok, f"uav: {compared} points compared, {wrong} disagree; oracle "
                  f"{rep.soundness_violations} unsound, {rep.completeness_violations} incomplete "
                  f"beyond {rep.margin:.3g}; compile {dt:.3f} s")


def test_criterion_4_acas(report):
    job = builtin_job("acas")
    f = job.compile()
    rep = validate(f, job.trajectory, job.polygon, job.oracle_config())
    segs = rg.clauses(f, rg.SEGMENT)
    points = [q for q in find_transitions(job.trajectory, job.polygon) if q.finite]
    placements = sorted((float(q.x), float(q.y)) for q in points)
    ok = (rep.passed and len(segs) == 2 and len(rg.clauses(f, rg.NOTCH)) == 2
          and placements == [(0.0, 0.0), (2.0, 2.0)])
    report(4, ok, f"acas: {len(segs)} segment clauses, notches at {placements}; oracle "
                  f"{rep.soundness_violations} unsound, {rep.completeness_violations} incomplete")


def test_criterion_5_dubins(report):
    job = builtin_job("dubins")
    t0 = time.perf_counter()
    f = job.compile()
    dt = time.perf_counter() - t0
    x0, x1, y0, y1 = job.window
    grid = ValidationGrid(x0, x1, y0, y1, 0.1)
    rep = validate(f, job.trajectory, job.polygon, OracleConfig(step=1e-3, grid=grid))
    nseg = len(build_segments(job.trajectory, job.polygon))
    ok = rep.passed and dt < 10
    report(5, ok, f"dubins: {nseg} segments; oracle {rep.soundness_violations} unsound, "
                  f"{rep.completeness_violations} incomplete beyond {rep.margin:.3g}; compile {dt:.3f} s")


def test_criterion_6_property_suites(report):
    outcomes = [check() for check in properties.ALL]
    ok = all(o.ok for o in outcomes)
    report(6, ok, "; ".join(o.line() for o in outcomes))
