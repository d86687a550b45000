import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import Delaunay

from funkvoronoi import WeightedPoint, build_apollonius, tritangent_circles
from funkvoronoi.apollonius import (
    apollonius_distance,
    hidden_sites,
    make_hyperbola,
    nearest_site,
)
from funkvoronoi.errors import DegenerateTriple


def wp(x, y, w=0.0):
    return WeightedPoint((x, y), w)


def _positive(circles):
    return [c for c in circles if c.radius >= 0]


def test_distance_examples():
    assert apollonius_distance(wp(0, 0, 1), [2, 0]) == 1
    assert apollonius_distance(wp(0.3, 0.2, 0.7), [0.3, 0.2]) == pytest.approx(-0.7)
    assert apollonius_distance(wp(3, 4), [0, 0]) == 5


def test_tritangent_equal_weights_is_circumcircle():
    (c,) = tritangent_circles(wp(0, 0), wp(1, 0), wp(0, 1))
    assert np.allclose(c.center, [0.5, 0.5]) and c.radius == pytest.approx(np.sqrt(0.5))


def test_tritangent_isoceles():
    (c,) = tritangent_circles(wp(-1, 0), wp(1, 0), wp(0, 2))
    assert np.allclose(c.center, [0, 0.75]) and c.radius == pytest.approx(1.25)


def test_tritangent_weighted():
    sites = [wp(-1, 0, 0.5), wp(1, 0, 0.5), wp(0, 2)]
    circles = _positive(tritangent_circles(*sites))
    assert any(np.allclose(c.center, [0, 1.05]) and c.radius == pytest.approx(0.95) for c in circles)
    for c in tritangent_circles(*sites):
        res = [apollonius_distance(s, c.center) - c.radius for s in sites]
        assert np.max(np.abs(res)) <= 1e-9


def test_tritangent_degenerate():
    with pytest.raises(DegenerateTriple):
        tritangent_circles(wp(0, 0), wp(1, 0), wp(2, 0))


def test_hyperbola_equal_weights_is_perpendicular_bisector():
    h = make_hyperbola(np.array([-1.0, 0]), 0.3, np.array([1.0, 0]), 0.3)
    pts = h(np.linspace(-3, 3, 13))
    assert np.allclose(pts[:, 0], 0, atol=1e-12)


def test_hyperbola_points_equidistant():
    ci, cj = np.array([0.2, -0.1]), np.array([1.1, 0.7])
    h = make_hyperbola(ci, 0.4, cj, 0.1)
    pts = h(np.linspace(-5, 5, 41))
    gap = (np.linalg.norm(pts - ci, axis=1) - 0.4) - (np.linalg.norm(pts - cj, axis=1) - 0.1)
    assert np.max(np.abs(gap)) <= 1e-9
    assert np.allclose(h.param(pts), np.linspace(-5, 5, 41))


def test_build_single_site():
    dg = build_apollonius([wp(0, 0, 1)])
    assert dg.vertices == [] and dg.edges == [] and dg.hidden == []


def test_build_two_sites_one_edge():
    dg = build_apollonius([wp(-1, 0, 0.2), wp(1, 0, 0.2)])
    assert len(dg.vertices) == 0 and len(dg.edges) == 1


def test_build_square_perturbed():
    dg = build_apollonius([wp(0, 0), wp(1, 0), wp(1, 1), wp(0, 1)])
    assert len(dg.vertices) == 2
    for v in dg.vertices:
        assert v.radius == pytest.approx(np.sqrt(0.5), abs=1e-8)
        assert np.allclose(v.center, [0.5, 0.5], atol=1e-8)


def test_hidden_rule():
    sites = [wp(0, 0, 1.0), wp(0.2, 0, 0.5), wp(3, 0, 0.1)]
    assert hidden_sites(sites) == [1]
    assert build_apollonius(sites).hidden == [1]


def test_nearest_site_tie_and_centres():
    sites = [wp(-1, 0), wp(1, 0), wp(0, 3)]
    assert nearest_site(sites, [0.0, 0.0]) == -1
    for i, s in enumerate(sites):
        assert nearest_site(sites, s.center) == i


def _random_sites(rng, n, equal=False):
    c = rng.uniform(-1, 1, (n, 2))
    w = np.full(n, 0.05) if equal else rng.uniform(0, 0.2, n)
    return [WeightedPoint(ci, wi) for ci, wi in zip(c, w)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 12))
def test_vertex_invariants(seed, n):
    sites = _random_sites(np.random.default_rng(seed), n)
    dg = build_apollonius(sites)
    c, w = dg.centers, dg.weights
    for v in dg.vertices:
        d = np.linalg.norm(c - v.center, axis=1) - w
        assert np.max(np.abs(d[list(v.triple)] - v.radius)) <= 1e-9
        assert np.min(d - v.radius) >= -1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 12))
def test_equal_weights_match_delaunay(seed, n):
    sites = _random_sites(np.random.default_rng(seed), n, equal=True)
    dg = build_apollonius(sites)
    pts = dg.centers
    tri = Delaunay(pts)
    expect = []
    for s in tri.simplices:
        a, b, c = pts[s]
        d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        ux = (a @ a * (b[1] - c[1]) + b @ b * (c[1] - a[1]) + c @ c * (a[1] - b[1])) / d
        uy = (a @ a * (c[0] - b[0]) + b @ b * (a[0] - c[0]) + c @ c * (b[0] - a[0])) / d
        expect.append((tuple(sorted(s.tolist())), np.array([ux, uy])))
    got = {v.triple: v.center for v in dg.vertices}
    assert len(got) == len(expect)
    for t, x in expect:
        assert np.linalg.norm(got[t] - x) <= 1e-7


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
def test_cells_cover_plane(seed, n):
    rng = np.random.default_rng(seed)
    sites = _random_sites(rng, n)
    dg = build_apollonius(sites)
    q = rng.uniform(-1.5, 1.5, (2000, 2))
    truth = nearest_site(sites, q, tol=1e-6)
    got = dg.locate(q)
    ok = truth >= 0
    assert np.mean(got[ok] == truth[ok]) >= 0.999
