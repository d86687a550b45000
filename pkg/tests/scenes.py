"""Random cones, interior points and scenes shared by the tests."""

from __future__ import annotations

import numpy as np

from funkvoronoi import Cone, PlanarCone

ELLIPSE_MAP = np.diag([2.0, 1.0, 1.0])
WEDGE = PlanarCone(0.0, 1.0, 1.0, -0.2)


def regular_polygon(m: int, radius: float = 1.0, phase: float = 0.0) -> np.ndarray:
    a = phase + 2 * np.pi * np.arange(m) / m
    return radius * np.c_[np.cos(a), np.sin(a)]


def square_cone() -> Cone:
    return Cone.from_polygon([[1, 1], [-1, 1], [-1, -1], [1, -1]])


def pentagon_cone() -> Cone:
    return Cone.from_polygon(regular_polygon(5))


def kernel_cones() -> dict:
    """The cone families used for the distance-kernel checks."""
    return {
        "wedge": WEDGE.cone,
        "circular30": Cone.circular(np.radians(30)),
        "circular45": Cone.circular(np.radians(45)),
        "circular60": Cone.circular(np.radians(60)),
        "elliptical": Cone.elliptical(np.radians(45), ELLIPSE_MAP),
        "square": square_cone(),
        "pentagon": pentagon_cone(),
    }


def _in_polygon_scaled(rng, poly: np.ndarray, n: int, shrink: float) -> np.ndarray:
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    nrm = np.c_[poly[:, 1] - np.roll(poly, -1, axis=0)[:, 1],
                np.roll(poly, -1, axis=0)[:, 0] - poly[:, 0]]
    off = -(nrm * poly).sum(axis=1)
    out = []
    while sum(len(o) for o in out) < n:
        q = rng.uniform(lo, hi, size=(4 * n, 2))
        ok = np.all(q @ nrm.T + off >= 0, axis=1)
        out.append(q[ok])
    return shrink * np.vstack(out)[:n]


def interior_points(cone: Cone, n: int, rng, slack: float = 0.05,
                    heights=(0.5, 2.0)) -> np.ndarray:
    """``n`` points well inside ``cone`` (a fraction ``slack`` away from its boundary)."""
    z = rng.uniform(*heights, size=n)
    if cone.dim == 2:
        r1, r2 = _wedge_rays(cone)
        t = rng.uniform(slack, 1 - slack, size=n)
        return z[:, None] * ((1 - t)[:, None] * r1 + t[:, None] * r2)
    if cone.kind == "polyhedral":
        xy = _in_polygon_scaled(rng, cone.polygon, n, 1 - slack)
        return np.c_[xy, np.ones(n)] * z[:, None]
    rad = (1 - slack) * cone.tan * np.sqrt(rng.uniform(0, 1, n))
    ang = rng.uniform(0, 2 * np.pi, n)
    q = np.c_[rad * np.cos(ang), rad * np.sin(ang), np.ones(n)] * z[:, None]
    return cone.denormalize(q)


def _wedge_rays(cone: Cone) -> np.ndarray:
    n1, n2 = cone.normals
    out = []
    for a, other in ((n1, n2), (n2, n1)):
        d = np.array([-a[1], a[0]])
        if other @ d < 0:
            d = -d
        out.append(d / np.linalg.norm(d))
    return np.array(out)


def round_scene(rng, n: int, elliptical: bool = False):
    """A circular or elliptical cone with ``n`` sites spread over a thin slab."""
    th = np.radians(rng.uniform(30, 60))
    cone = Cone.elliptical(th, ELLIPSE_MAP) if elliptical else Cone.circular(th)
    sites = interior_points(cone, n, rng, slack=0.15, heights=(0.85, 1.15))
    return cone, sites


def polygon_scene(rng, m: int, n: int):
    """A polygonal cone over a slightly jittered regular m-gon with ``n`` sites."""
    r = rng.uniform(0.9, 1.1, m)
    v = regular_polygon(m, 1.0, rng.uniform(0, 2 * np.pi)) * r[:, None]
    cone = Cone.from_polygon(v)
    sites = interior_points(cone, n, rng, slack=0.2, heights=(0.9, 1.1))
    return cone, sites


def circumcenter_triple(rng, direction, elliptical: bool = False):
    """``(cone, p, q, r)`` with ``r`` the extreme site and ``p``, ``q`` incomparable."""
    from funkvoronoi import FORWARD, dominates

    while True:
        cone, pts = round_scene(rng, 3, elliptical)
        z = cone.normalize(pts)[:, 2]
        k = int(np.argmax(z) if direction is FORWARD else np.argmin(z))
        p, q = (pts[i] for i in range(3) if i != k)
        if not (dominates(cone, p, q, direction) or dominates(cone, q, p, direction)):
            return cone, p, q, pts[k]
