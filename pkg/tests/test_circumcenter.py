import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funkvoronoi import FORWARD, REVERSE, Cone, RegionLabel, circumcenter_setup, classify, funk_distance, pencil
from funkvoronoi.errors import DominatedPair, WrongExtremeSite
from funkvoronoi.oracle import circumcenter_sweep

import scenes

ROUND = Cone.circular(np.pi / 4)
P, Q, R = np.array([-0.3, 0, 0.65]), np.array([0.3, 0, 0.65]), np.array([0, 0, 0.9])


@pytest.fixture(scope="module")
def sym():
    return circumcenter_setup(ROUND, P, Q, R)


def test_setup_symmetric(sym):
    assert sym.cross_section.radius == pytest.approx(0.9)
    assert np.allclose(sym.zp.center, [-0.3, 0]) and sym.zp.radius == pytest.approx(0.25)
    assert np.allclose(sym.zq.center, [0.3, 0]) and sym.zq.radius == pytest.approx(0.25)
    assert np.allclose(sym.r_point, 0)


def test_setup_errors():
    with pytest.raises(WrongExtremeSite):
        circumcenter_setup(ROUND, P, R, Q)
    with pytest.raises(WrongExtremeSite):
        circumcenter_setup(ROUND, P, Q, R, REVERSE)
    with pytest.raises(DominatedPair):
        circumcenter_setup(ROUND, [0, 0, 0.5], [0.05, 0, 0.6], [0, 0.1, 0.9])


def test_r_above_p_is_z0():
    su = circumcenter_setup(ROUND, P, Q, 1.2 * P)
    out = classify(su)
    assert out.label is RegionLabel.Z0 and out.circumcenters == []


def test_pencil_symmetric_midpoint(sym):
    assert np.allclose(pencil(sym, 0.5).center, 0, atol=1e-12)


def test_pencil_tangent_to_zero_balls(sym):
    cs = sym.cross_section
    th = np.linspace(0, 2 * np.pi, 200_001)
    for t in np.arange(1, 10) / 10:
        ball = pencil(sym, t)
        c = cs.lift(ball.center)
        for zb in (sym.zp, sym.zq):
            rim = cs.lift(zb.center + (1 - 1e-12) * zb.radius * np.c_[np.cos(th), np.sin(th)])
            d = funk_distance(ROUND, rim, np.broadcast_to(c, rim.shape), FORWARD)
            assert abs(d.min() - ball.radius) <= 1e-7


def test_pencil_radius_monotone_towards_ends(sym):
    t = np.linspace(1e-6, 0.5, 400)
    r = np.array([pencil(sym, s).radius for s in t])
    assert np.all(np.diff(r) < 0)


def test_symmetric_z2_roots(sym):
    out = classify(sym)
    assert out.label is RegionLabel.Z2 and len(out.circumcenters) == 2
    reps = sorted(c.representative[1] for c in out.circumcenters)
    circles = sorted(c.circle_center[1] for c in out.circumcenters)
    # tangent-circle centres in the zero-ball plane sit at +-0.055; the
    # apex ray through such a circle meets the slice at 0.9 * 0.055 / 0.955
    assert np.allclose(circles, [-0.055, 0.055], atol=1e-6)
    assert np.allclose(reps, [-0.9 * 0.055 / 0.955, 0.9 * 0.055 / 0.955], atol=1e-6)
    for c in out.circumcenters:
        d = [funk_distance(ROUND, s, c.ray) for s in (P, Q, R)]
        assert np.ptp(d) <= 1e-7
    assert circumcenter_sweep(sym).count == 2


def test_nudged_r_is_b1():
    su = circumcenter_setup(ROUND, P, Q, [0, 0.3, 0.9])
    out = classify(su)
    assert out.label is RegionLabel.B1 and len(out.circumcenters) == 1
    assert circumcenter_sweep(su).count == 1


def test_far_r_is_w():
    su = circumcenter_setup(ROUND, P, Q, [0.8, 0, 0.9])
    out = classify(su)
    assert out.label is RegionLabel.W and out.circumcenters == []


def test_label_counts():
    assert [RegionLabel(x).count for x in ("Z0", "Z1", "B1", "Z2", "W")] == [0, 0, 1, 2, 0]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([FORWARD, REVERSE]), st.booleans())
def test_random_triples(seed, direction, elliptical):
    cone, p, q, r = scenes.circumcenter_triple(np.random.default_rng(seed), direction, elliptical)
    su = circumcenter_setup(cone, p, q, r, direction)
    out = classify(su)
    assert len(out.circumcenters) == out.label.count
    assert circumcenter_sweep(su).count == len(out.circumcenters)
    for c in out.circumcenters:
        ray = c.ray
        for lam in (1.0, 0.5, 2.0):
            d = [funk_distance(cone, s, lam * ray, direction) for s in (p, q, r)]
            assert np.ptp(d) <= 1e-7
