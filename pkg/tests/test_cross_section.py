import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funkvoronoi import (
    FORWARD,
    REVERSE,
    Cone,
    choose_cross_section,
    funk_distance,
    lift_to_ray,
    project_site,
    representative,
    weighted_distance,
    zero_ball,
)
from funkvoronoi.cross_section import section_at
from funkvoronoi.errors import EmptySiteSet, FunkError, NotInterior, WrongSideOfSection

import scenes

ROUND = Cone.circular(np.pi / 4)


def test_choose_forward_and_reverse():
    sites = [[0, 0, 0.5], [0.1, 0, 0.65]]
    cs = choose_cross_section(ROUND, sites, FORWARD, 0.1)
    assert cs.height == pytest.approx(0.715) and cs.radius == pytest.approx(0.715)
    cs = choose_cross_section(ROUND, sites, REVERSE, 0.1)
    assert cs.height == pytest.approx(0.45) and cs.radius == pytest.approx(0.45)


def test_choose_square_section():
    cone = scenes.square_cone()
    sites = [[0, 0, 1.0], [0.2, 0.1, 0.8]]
    with pytest.raises(FunkError):
        choose_cross_section(cone, sites, FORWARD, 0.0)
    cs = choose_cross_section(cone, sites, FORWARD, 0.05)
    assert np.ptp(cs.vertices, axis=0) == pytest.approx([2.1, 2.1])


def test_choose_empty():
    with pytest.raises(EmptySiteSet):
        choose_cross_section(ROUND, np.zeros((0, 3)))


def test_project_axis_site():
    cs = section_at(ROUND, 1.0, FORWARD)
    ws = project_site(ROUND, cs, [0, 0, 0.5])
    assert np.allclose(ws.position, 0) and ws.lam == 2 and ws.weight == pytest.approx(-np.log(2))


def test_project_reverse():
    cs = section_at(ROUND, 0.25, REVERSE)
    ws = project_site(ROUND, cs, [0.1, 0, 0.5])
    assert np.allclose(ws.position, [0.05, 0]) and ws.weight == pytest.approx(np.log(0.5))


def test_project_on_section_identity():
    cs = section_at(ROUND, 1.0, FORWARD)
    ws = project_site(ROUND, cs, [0.2, 0.1, 1.0])
    assert ws.lam == 1 and ws.weight == 0


def test_project_wrong_side():
    cs = section_at(ROUND, 1.0, FORWARD)
    with pytest.raises(WrongSideOfSection):
        project_site(ROUND, cs, [0, 0, 1.5])


def test_zero_ball_disk():
    cs = section_at(ROUND, 1.0, FORWARD)
    zb = zero_ball(ROUND, cs, [0.2, 0, 0.5])
    assert np.allclose(zb.center, [0.2, 0]) and zb.radius == pytest.approx(0.5)


def test_zero_ball_thirty_degrees():
    cone = Cone.circular(np.radians(30))
    zb = zero_ball(cone, section_at(cone, 1.0), [0, 0, 0.5])
    assert zb.radius == pytest.approx(0.5 * np.tan(np.radians(30)))


def test_zero_ball_square():
    cone = scenes.square_cone()
    zb = zero_ball(cone, section_at(cone, 1.0), [0.1, 0.1, 0.5])
    v = zb.vertices
    assert v.min(axis=0) == pytest.approx([-0.4, -0.4]) and v.max(axis=0) == pytest.approx([0.6, 0.6])


def test_zero_ball_boundary_has_zero_distance():
    cone = Cone.circular(np.radians(35))
    s = np.array([0.1, -0.05, 0.6])
    cs = section_at(cone, 1.0)
    zb = zero_ball(cone, cs, s)
    t = np.linspace(0, 2 * np.pi, 50)
    pts = zb.center + zb.radius * np.c_[np.cos(t), np.sin(t)]
    assert np.max(np.abs(funk_distance(cone, s, cs.lift(pts)))) <= 1e-9


def test_weighted_distance_examples():
    cs = section_at(ROUND, 1.0, FORWARD)
    ws = project_site(ROUND, cs, [0.1, 0.1, 1.0])
    assert weighted_distance(cs, ws, ws.position) == pytest.approx(0, abs=1e-12)
    ws = project_site(ROUND, cs, [0, 0, 0.5])
    assert weighted_distance(cs, ws, [0, 0]) == pytest.approx(-np.log(2))


def test_weighted_distance_outside():
    cs = section_at(ROUND, 1.0, FORWARD)
    ws = project_site(ROUND, cs, [0, 0, 0.5])
    with pytest.raises(NotInterior):
        weighted_distance(cs, ws, [1.0, 0.0])


def test_lift_round_trip():
    cone = Cone.elliptical(0.7, np.diag([2.0, 1.0, 1.0]))
    cs = section_at(cone, 1.3, FORWARD)
    q = np.array([[0.1, -0.2], [0.0, 0.0], [0.5, 0.3]])
    assert np.allclose(representative(cs, lift_to_ray(cs, q)), q, atol=1e-12)
    assert np.allclose(lift_to_ray(cs, [0, 0]), [0, 0, 1])


def test_lift_boundary_point_is_boundary_ray():
    cs = section_at(ROUND, 1.0)
    assert abs(float(np.dot(lift_to_ray(cs, [1.0, 0.0]), [np.sqrt(0.5), 0, -np.sqrt(0.5)]))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([FORWARD, REVERSE]), st.booleans())
def test_reduction_identity(seed, direction, elliptical):
    rng = np.random.default_rng(seed)
    cone, sites = scenes.round_scene(rng, 6, elliptical)
    cs = choose_cross_section(cone, sites, direction)
    ws = [project_site(cone, cs, s, direction, i) for i, s in enumerate(sites)]
    q = scenes.interior_points(cone, 40, rng)
    rep = representative(cs, q)
    for w, s in zip(ws, sites):
        lhs = funk_distance(cone, s, cone.denormalize(cs.lift(rep)), direction)
        assert np.max(np.abs(lhs - weighted_distance(cs, w, rep))) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 2.0))
def test_bisector_ray_invariance(seed, lam):
    rng = np.random.default_rng(seed)
    cone, (a, b, p) = scenes.round_scene(rng, 3)
    gap = funk_distance(cone, a, p) - funk_distance(cone, b, p)
    assert abs(funk_distance(cone, a, lam * p) - funk_distance(cone, b, lam * p) - gap) <= 1e-9
