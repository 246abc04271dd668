import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pdrecon.errors import DegenerateInput, DependentDirections, TiedAngle, ZeroProjection
from pdrecon.geometry import (
    angle_of,
    build_basis,
    gp_check,
    heights,
    min_pairwise_angle,
    project2,
    radial_cw_order,
    tilt,
)

from oracles import brute_min_angle, mp_angle

coord = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize(
    "p, expected",
    [((1, 2, 3, 4), (1, 2)), ((0, 0), (0, 0)), ((-3.5, 7, 0), (-3.5, 7))],
)
def test_project2(p, expected):
    assert project2(p) == expected


def test_angle_of_axes():
    assert angle_of((1, 0, 5)) == 0.0
    assert angle_of((0, 1, -2)) == pytest.approx(math.pi / 2, abs=1e-15)


def test_angle_of_third_quadrant_matches_high_precision():
    # reference value from 50-digit atan2
    assert angle_of((-1, -1)) == pytest.approx(mp_angle(-1, -1), abs=1e-15)
    assert angle_of((-1, -1)) == pytest.approx(5 * math.pi / 4, abs=1e-15)


def test_angle_of_zero_projection():
    with pytest.raises(ZeroProjection):
        angle_of((0, 0, 1))


@given(coord, coord)
def test_angle_of_opposite_vector(x, y):
    assume(math.hypot(x, y) > 1e-6)
    diff = (angle_of((-x, -y)) - angle_of((x, y)) - math.pi) % (2 * math.pi)
    assert min(diff, 2 * math.pi - diff) < 1e-9


@given(coord, coord)
def test_angle_of_range(x, y):
    assume((x, y) != (0.0, 0.0))
    a = angle_of((x, y))
    assert 0.0 <= a < 2 * math.pi


def test_gp_check_triangle():
    report = gp_check([(0, 0), (1, 0), (0, 1)], 1e-9)
    assert report.affine_ok and report.projection_ok
    # (0,0) and (1,0) share their e2 height
    assert not report.unique_height_ok
    assert report.witnesses == [(0, 1)]


def test_gp_check_all_good():
    report = gp_check([(0, 0), (1, 0.5), (0.2, 1)], 1e-9)
    assert report.ok and report.witnesses == []


def test_gp_check_collinear():
    report = gp_check([(0, 0), (1, 0), (2, 0)])
    assert not report.projection_ok
    assert (0, 1, 2) in report.witnesses


def test_gp_check_equal_heights():
    report = gp_check([(0, 5), (1, 5)])
    assert not report.unique_height_ok
    assert report.witnesses == [(0, 1)]


def test_gp_check_affine_in_3d():
    # four coplanar points in R^3 project to a non-degenerate planar set
    P = [(0, 0, 0), (1, 0.1, 0), (0.3, 1, 0), (0.7, 0.6, 0)]
    report = gp_check(P)
    assert not report.affine_ok
    assert (0, 1, 2, 3) in report.witnesses
    assert report.projection_ok and report.unique_height_ok


def test_gp_check_few_points_dependent():
    report = gp_check([(0, 0, 0), (1, 1, 1), (2, 2.5, 2)])
    assert report.affine_ok
    report = gp_check([(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert not report.affine_ok and not report.projection_ok


@pytest.mark.parametrize(
    "V, expected",
    [
        ([(0, 0), (1, 0), (0, 1)], math.pi / 4),
        ([(0, 0), (1, 0), (1, 1), (0, 1)], math.pi / 4),
        ([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)], math.pi / 3),
    ],
)
def test_min_pairwise_angle_examples(V, expected):
    assert min_pairwise_angle(V) == pytest.approx(expected, abs=1e-12)
    assert min_pairwise_angle(V) == pytest.approx(brute_min_angle(V), abs=1e-12)


def test_min_pairwise_angle_needs_three():
    with pytest.raises(DegenerateInput):
        min_pairwise_angle([(0, 0), (1, 1)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 8), st.floats(0.1, 50), coord, coord)
def test_min_pairwise_angle_against_brute_force(seed, n, scale, tx, ty):
    V = np.random.default_rng(seed).random((n, 2))
    theta = min_pairwise_angle(V)
    assert theta == pytest.approx(brute_min_angle(V), abs=1e-9)
    moved = V * scale + np.array([tx, ty])
    assert min_pairwise_angle(moved) == pytest.approx(theta, abs=1e-7)


def test_radial_cw_order_examples():
    out = radial_cw_order((0, 0), [(1, 1), (-1, 1)])
    assert [tuple(p) for p in out] == [(-1, 1), (1, 1)]
    assert radial_cw_order((3, 4), []) == []
    assert [tuple(p) for p in radial_cw_order((0, 0), [(0, 1)])] == [(0, 1)]


def test_radial_cw_order_tie():
    with pytest.raises(TiedAngle):
        radial_cw_order((0, 0), [(1, 1), (2, 2)])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 12))
def test_radial_cw_order_strictly_decreasing(seed, k):
    rng = np.random.default_rng(seed)
    C = rng.random((k, 3))
    v = rng.random(3)
    out = radial_cw_order(v, list(C))
    ang = [angle_of(p - v) for p in out]
    assert all(a > b for a, b in zip(ang, ang[1:]))
    assert sorted(map(tuple, out)) == sorted(map(tuple, C))


def _tilt_ok(s, s2, P, s_star):
    for p1 in P:
        for p2 in P:
            diff = p1 - p2
            a, b, c = float(s @ diff), float(s2 @ diff), float(heights(diff, s_star))
            if a != 0:
                if np.sign(c) != np.sign(a):
                    return False
            elif np.sign(c) != np.sign(b):
                return False
    return True


def test_tilt_example():
    P = np.array([(0, 0), (0, 1), (1, 0)], dtype=float)
    s_star = tilt((1, 0), (0, 1), P)
    h = heights(P, s_star)
    assert h[0] < h[1] < h[2]
    assert np.linalg.norm(s_star) == pytest.approx(1.0)


def test_tilt_preserves_strict_order():
    P = np.random.default_rng(2).random((15, 3))
    s, s2 = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    s_star = tilt(s, s2, P)
    assert list(np.argsort(P @ s)) == list(np.argsort(heights(P, s_star)))
    assert _tilt_ok(s, s2, P, s_star)


def test_tilt_single_point_and_dependent():
    out = tilt((1, 0), (0, 1), np.array([[0.3, 0.2]]))
    assert np.linalg.norm(out) == pytest.approx(1.0)
    with pytest.raises(DependentDirections):
        tilt((1, 0), (-1, 0), np.zeros((2, 2)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 12), st.integers(2, 4))
def test_tilt_properties_with_ties(seed, n, d):
    rng = np.random.default_rng(seed)
    P = rng.integers(0, 4, size=(n, d)).astype(float)
    s, s2 = np.eye(d)[0], np.eye(d)[1]
    assert _tilt_ok(s, s2, P, tilt(s, s2, P))


def test_build_basis_orthonormal():
    P = np.random.default_rng(5).random((10, 4))
    B = np.array(build_basis(P))
    assert np.allclose(B @ B.T, np.eye(4), atol=1e-10)
    assert np.allclose(B[1][2:], 0) and np.allclose(B[0][2:], 0)


def test_build_basis_breaks_e1_ties():
    P = np.array([(0.5, 0.1), (0.5, 0.9), (0.2, 0.4), (0.8, 0.3)])
    B = np.array(build_basis(P))
    h = heights(P, B[1])
    assert h[0] != h[1]
    assert len(np.unique(h)) == len(P)
    assert np.allclose(B @ B.T, np.eye(2), atol=1e-10)


def test_build_basis_two_points_2d():
    b1, b2 = build_basis(np.array([(0.0, 0.0), (1.0, 2.0)]))
    assert abs(b1 @ b2) < 1e-12
    assert np.linalg.norm(b1) == pytest.approx(1.0) and np.linalg.norm(b2) == pytest.approx(1.0)
