import math

import numpy as np
import pytest

from activecorners import builtin_job
from activecorners.trajectory import (
    X_OF_Y, TrajectoryError, clamp, eval_traj, make_piece, make_trajectory,
)
from activecorners.trajectory import eval_traj_both


def fig1_trajectory():
    return make_trajectory([make_piece("-2*x", 0, 5), make_piece("x - 15", 5, "inf")])


def test_two_piece_trajectory_valid():
    t = fig1_trajectory()
    assert t.domain == (0, math.inf)
    assert len(t.pieces) == 2


def test_overlap_rejected():
    with pytest.raises(TrajectoryError, match="overlap"):
        make_trajectory([make_piece("x", 0, 5), make_piece("x", 4, 9)])


def test_gap_rejected():
    with pytest.raises(TrajectoryError, match="gap"):
        make_trajectory([make_piece("x", 0, 5), make_piece("x", 6, 9)], domain=(0, 9))


def test_declared_domain_must_be_covered():
    with pytest.raises(TrajectoryError, match="gap"):
        make_trajectory([make_piece("x", 0, 5)], domain=(-1, 5))


def test_non_finite_piece_rejected():
    with pytest.raises(TrajectoryError):
        make_piece("sqrt(4 - x^2)", -3, 1)
    with pytest.raises(TrajectoryError):
        make_piece("1/x", -1, 1)


def test_eval_examples():
    t = fig1_trajectory()
    assert eval_traj(t, 5) == -10
    assert eval_traj(t, 0) == 0
    uav = builtin_job("uav").trajectory
    assert math.isclose(eval_traj(uav, 5), 5 * math.sqrt(3), rel_tol=1e-14)
    left, right = eval_traj_both(uav, 5)
    assert math.isclose(left, right, rel_tol=1e-14)


def test_eval_outside_domain():
    with pytest.raises(TrajectoryError, match="outside"):
        eval_traj(fig1_trajectory(), -1)


def test_jump_exposes_both_limits():
    t = make_trajectory([make_piece("x", 0, 1), make_piece("x + 3", 1, 2)])
    assert eval_traj(t, 1) == 1
    assert eval_traj_both(t, 1) == (1, 4)


def test_clamp_examples():
    g = clamp(make_piece("-2*x", 0, 5), (0, 5))
    assert g(-1) == 0
    assert g(6) == -10
    assert g(2.5) == -5


def test_clamp_outside_subdomain():
    with pytest.raises(TrajectoryError):
        clamp(make_piece("-2*x", 0, 5), (-1, 5))


def test_clamp_unbounded_side_not_clamped():
    g = clamp(make_piece("x - 15", 5, "inf"), (5, math.inf))
    assert g(100) == 85
    assert g(0) == -10


def test_axis_swap_involution():
    rng = np.random.default_rng(8)
    for k in range(20):
        c = rng.uniform(-1, 1, 3).round(3)
        p = make_piece(f"{c[0]}*x^2 + {c[1]}*x + {c[2]}", -2, 2)
        twice = p.swapped().swapped()
        assert twice.orientation == p.orientation
        s = rng.uniform(-2, 2, 25)
        assert np.allclose(twice.values(s), p.values(s), rtol=0, atol=0)
        assert p.swapped().orientation == X_OF_Y


def test_x_of_y_piece_points():
    p = make_piece("y^2", -1, 1, orientation=X_OF_Y)
    assert p.point(0.5) == (0.25, 0.5)
