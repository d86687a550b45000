import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funkvoronoi import (
    FORWARD,
    REVERSE,
    Cone,
    GeneralPositionViolation,
    NotInterior,
    ball_apex,
    ball_contains,
    contains,
    dominates,
    funk_distance,
    partial_order,
    prune_dominated,
)
from funkvoronoi.errors import FunkError
from funkvoronoi.oracle import beta_scaling_distance

import scenes

ROUND = Cone.circular(np.pi / 4)
WEDGE = Cone.polyhedral([[1, 1], [-1, 1]])
PYRAMID = Cone.polyhedral([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]])  # z >= max(|x|, |y|)


# -- construction -----------------------------------------------------------


def test_circular_angle_range():
    with pytest.raises(FunkError):
        Cone.circular(np.pi / 2)


def test_elliptical_needs_invertible_map():
    with pytest.raises(FunkError):
        Cone.elliptical(0.5, np.zeros((3, 3)))


def test_polyhedral_not_pointed():
    with pytest.raises(FunkError):
        Cone.polyhedral([[0, 0, 1], [0, 0, 1], [0, 0, 1]])


def test_from_polygon_section():
    cone = scenes.square_cone()
    assert cone.kind == "polyhedral" and len(cone.normals) == 4
    assert np.allclose(np.abs(cone.polygon), 1)


def test_cone_is_immutable():
    with pytest.raises(Exception):
        ROUND.half_angle = 0.1


# -- membership ---------------------------------------------------------------


def test_contains_axis_point():
    assert contains(ROUND, [0, 0, 1], strict=True)


def test_contains_boundary_not_strict_interior():
    assert not contains(ROUND, [1, 0, 1], strict=True)
    assert contains(ROUND, [0.5, 0, 1])


def test_contains_pyramid():
    assert contains(PYRAMID, [0.5, 0.5, 1])


def test_contains_uses_half_angle_about_axis():
    cone = Cone.circular(np.radians(30))
    t = np.tan(np.radians(30))
    assert contains(cone, [0.99 * t, 0, 1], strict=True)
    assert not contains(cone, [1.01 * t, 0, 1])


# -- distances ----------------------------------------------------------------


def test_distance_along_ray():
    assert funk_distance(WEDGE, [0, 1], [0, 2]) == pytest.approx(-np.log(2), abs=1e-12)


def test_distance_lateral():
    assert funk_distance(WEDGE, [0, 1], [0.5, 1]) == pytest.approx(np.log(2), abs=1e-12)


def test_distance_self_is_zero():
    for cone, p in ((ROUND, [0.1, 0.2, 1]), (WEDGE, [0.2, 1]), (PYRAMID, [0.1, -0.3, 1])):
        assert funk_distance(cone, p, p) == pytest.approx(0, abs=1e-12)


def test_distance_circular_quadratic_root():
    assert funk_distance(ROUND, [0, 0, 1], [0.5, 0, 1]) == pytest.approx(np.log(2), abs=1e-12)


def test_distance_reverse_swaps():
    a, b = [0.1, 0, 1], [0.2, 0.3, 1.5]
    assert funk_distance(ROUND, a, b, REVERSE) == funk_distance(ROUND, b, a, FORWARD)


def test_distance_elliptical_affine_invariance():
    m = np.array([[2, 0.3, 0], [0, 1, 0.1], [0, 0, 1.5]])
    cone = Cone.elliptical(0.6, m)
    a, b = np.array([0.1, 0.2, 1.0]), np.array([-0.2, 0.1, 1.2])
    base = Cone.circular(0.6)
    assert funk_distance(cone, m @ a, m @ b) == pytest.approx(funk_distance(base, a, b), abs=1e-12)


def test_distance_rejects_boundary():
    with pytest.raises(NotInterior):
        funk_distance(ROUND, [1, 0, 1], [0, 0, 1])


def test_distance_broadcasts():
    a = np.array([[0, 0, 1.0], [0.1, 0, 1.0]])
    assert funk_distance(ROUND, a, [0.2, 0.1, 1.2]).shape == (2,)


@pytest.mark.parametrize("name", list(scenes.kernel_cones()))
def test_distance_matches_oracle(name):
    cone = scenes.kernel_cones()[name]
    rng = np.random.default_rng(11)
    a, b = scenes.interior_points(cone, 500, rng), scenes.interior_points(cone, 500, rng)
    for d in (FORWARD, REVERSE):
        assert np.max(np.abs(funk_distance(cone, a, b, d) - beta_scaling_distance(cone, a, b, d))) <= 1e-9


# -- balls and domination -----------------------------------------------------


def test_ball_apex():
    assert np.allclose(ball_apex(ROUND, [0, 0, 1], 0.0), [0, 0, 1])
    assert np.allclose(ball_apex(ROUND, [0, 0, 1], np.log(2)), [0, 0, 0.5])
    assert np.allclose(ball_apex(ROUND, [0, 0, 1], np.log(2), REVERSE), [0, 0, 2])


def test_ball_contains_examples():
    assert ball_contains(ROUND, [0, 0, 1], 0.0, FORWARD, [0, 0, 2])
    assert not ball_contains(ROUND, [0, 0, 1], 0.0, FORWARD, [0, 0, 0.5])
    assert ball_contains(ROUND, [0, 0, 1], np.log(2), FORWARD, [0.4, 0, 1])


def test_dominates_examples():
    assert dominates(ROUND, [0, 0, 1], [0.1, 0, 2], FORWARD)
    assert not dominates(ROUND, [0, 0, 1], [0.1, 0, 2], REVERSE)
    assert dominates(WEDGE, [0, 2], [0, 1], REVERSE)


def test_dominates_boundary_contact_raises():
    with pytest.raises(GeneralPositionViolation):
        dominates(ROUND, [0, 0, 1], [1, 0, 2])


def test_prune_dominated():
    pts = [[0, 0, 1], [0, 0, 2]]
    assert prune_dominated(ROUND, pts, FORWARD) == ([0], [1])
    assert prune_dominated(ROUND, pts, REVERSE) == ([1], [0])
    assert prune_dominated(ROUND, [[-0.2, 0, 1], [0.2, 0, 1]], FORWARD) == ([0, 1], [])


def test_partial_order():
    assert partial_order(ROUND, [[0, 0, 1], [0, 0, 2]]) == [(0, 1)]
    assert partial_order(ROUND, [[-0.5, 0, 1], [0.5, 0, 1]]) == []


def test_partial_order_hasse_chain():
    # d <= e, c <= e, b <= c, a <= b in {y >= |x|}
    a, b, c, d, e = [0, 1], [0.2, 1.5], [0, 2.2], [1.4, 1.6], [0.3, 3.5]
    pairs = set(partial_order(WEDGE, [a, b, c, d, e]))
    assert {(3, 4), (2, 4), (1, 2), (0, 1)} <= pairs
    assert (0, 4) in pairs and (1, 4) in pairs  # transitive closure
    assert (3, 2) not in pairs and (0, 3) not in pairs


# -- properties ---------------------------------------------------------------

_cones = st.sampled_from(sorted(scenes.kernel_cones()))


@settings(max_examples=60, deadline=None)
@given(_cones, st.integers(0, 2**32 - 1))
def test_triangle_inequality(name, seed):
    cone = scenes.kernel_cones()[name]
    a, b, c = scenes.interior_points(cone, 3, np.random.default_rng(seed))
    for d in (FORWARD, REVERSE):
        assert funk_distance(cone, a, c, d) <= funk_distance(cone, a, b, d) + funk_distance(cone, b, c, d) + 1e-9


@settings(max_examples=60, deadline=None)
@given(_cones, st.integers(0, 2**32 - 1), st.floats(0.05, 0.95))
def test_geodesic_additivity(name, seed, t):
    cone = scenes.kernel_cones()[name]
    a, c = scenes.interior_points(cone, 2, np.random.default_rng(seed))
    b = (1 - t) * a + t * c
    for d in (FORWARD, REVERSE):
        lhs = funk_distance(cone, a, c, d)
        assert lhs == pytest.approx(funk_distance(cone, a, b, d) + funk_distance(cone, b, c, d), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(_cones, st.integers(0, 2**32 - 1), st.floats(0.1, 10))
def test_ray_additivity(name, seed, lam):
    cone = scenes.kernel_cones()[name]
    p, q = scenes.interior_points(cone, 2, np.random.default_rng(seed))
    assert funk_distance(cone, lam * p, q) == pytest.approx(funk_distance(cone, p, q) + np.log(lam), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(_cones, st.integers(0, 2**32 - 1), st.floats(0.01, 100))
def test_scaling_invariance(name, seed, s):
    cone = scenes.kernel_cones()[name]
    a, b = scenes.interior_points(cone, 2, np.random.default_rng(seed))
    assert funk_distance(cone, s * a, s * b) == pytest.approx(funk_distance(cone, a, b), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(_cones, st.integers(0, 2**32 - 1), st.floats(-1, 1), st.sampled_from([FORWARD, REVERSE]))
def test_ball_matches_distance(name, seed, rho, d):
    cone = scenes.kernel_cones()[name]
    c, q = scenes.interior_points(cone, 2, np.random.default_rng(seed))
    dist = funk_distance(cone, c, q, d)
    if abs(dist - rho) > 1e-9:
        assert ball_contains(cone, c, rho, d, q) == (dist <= rho)
