"""Circumcenters of three sites in a round cone.

Put the slice through the extreme site ``r`` (the one furthest from the apex
for forward distances, nearest for reverse).  ``r`` then carries no weight,
the other two sites become weighted points ``p'``, ``q'`` and every point of
their weighted bisector ``J`` is the centre of an opposite-direction Funk ball
tangent to both zero balls.  Walking ``J`` from one boundary endpoint to the
other, circumcenters are the places where that ball passes through ``r``:

    g(t) = d_r(center(t)) - radius(t).

The count of sign changes of ``g`` (0, 1 or 2) and the signs at the two ends
decide the region of ``r``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .apollonius import S_MAX, Hyperbola, make_hyperbola
from .core_metric import FORWARD, REVERSE, Cone, Direction, dominates, funk_distance
from .cross_section import (
    CrossSection,
    WeightedSite,
    ZeroBall,
    lift_to_ray,
    project_site,
    section_at,
    zero_ball,
)
from .elliptical import _Mapper, _check_cone, _intervals
from .errors import DegenerateTangency, DegenerateTriple, DominatedPair, FunkError, WrongExtremeSite
from .planar import flatten_curve

EPS = 1e-6
SAMPLES = 2048
ROOT_TOL = 1e-10


class RegionLabel(str, enum.Enum):
    Z0 = "Z0"
    Z1 = "Z1"
    B1 = "B1"
    Z2 = "Z2"
    W = "W"

    @property
    def count(self) -> int:
        return {"Z0": 0, "Z1": 0, "B1": 1, "Z2": 2, "W": 0}[self.value]


@dataclass(frozen=True)
class PencilBall:
    t: float
    center: np.ndarray
    radius: float


@dataclass(frozen=True, eq=False)
class CircumcenterSetup:
    cone: Cone
    direction: Direction
    cross_section: CrossSection
    sites: np.ndarray            # p, q, r in original coordinates
    wp: WeightedSite
    wq: WeightedSite
    r_point: np.ndarray          # r on the slice (normalised frame)
    zp: ZeroBall
    zq: ZeroBall
    curve: Hyperbola = field(repr=False)
    mapper: _Mapper = field(repr=False)
    s_table: np.ndarray = field(repr=False)   # curve parameters from u to v
    arc_table: np.ndarray = field(repr=False)  # arc length from u

    @property
    def u(self) -> np.ndarray:
        return self.mapper(0, self.curve(self.s_table[0]))

    @property
    def v(self) -> np.ndarray:
        return self.mapper(0, self.curve(self.s_table[-1]))

    def s_of(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.interp(t * self.arc_table[-1], self.arc_table, self.s_table)

    def center(self, t) -> np.ndarray:
        return self.mapper(0, self.curve(self.s_of(t)))

    def radius(self, x) -> np.ndarray:
        return _weighted(self, self.wp, x)

    def g(self, t) -> np.ndarray:
        x = self.center(t)
        return _weighted_point(self, self.r_point, 0.0, x) - self.radius(x)


def _weighted_point(su: CircumcenterSetup, pos, weight, x):
    cs = su.cross_section
    return funk_distance(cs.frame, cs.lift(pos), cs.lift(x), su.direction) + weight


def _weighted(su: CircumcenterSetup, ws: WeightedSite, x):
    return _weighted_point(su, ws.position, ws.weight, x)


def circumcenter_setup(cone: Cone, p, q, r, direction=FORWARD) -> CircumcenterSetup:
    """Slice through ``r`` and the weighted bisector of ``p`` and ``q`` on it."""
    _check_cone(cone)
    direction = Direction.parse(direction)
    sites = np.array([p, q, r], dtype=float)
    zs = cone.normalize(sites)[:, 2]
    if direction is FORWARD and not (zs[2] > zs[0] and zs[2] > zs[1]):
        raise WrongExtremeSite("r must be the site furthest from the apex")
    if direction is REVERSE and not (zs[2] < zs[0] and zs[2] < zs[1]):
        raise WrongExtremeSite("r must be the site nearest the apex")
    if dominates(cone, sites[0], sites[1], direction) or dominates(cone, sites[1], sites[0], direction):
        raise DominatedPair("one of p, q dominates the other")
    cs = section_at(cone, zs[2], direction)
    wp = project_site(cone, cs, sites[0], direction, 0)
    wq = project_site(cone, cs, sites[1], direction, 1)
    zp = zero_ball(cone, cs, sites[0], direction)
    zq = zero_ball(cone, cs, sites[1], direction)
    r_point = cone.normalize(sites[2])[:2].copy()
    try:
        curve = make_hyperbola(zp.center, zp.radius, zq.center, zq.radius)
    except DegenerateTriple:
        raise DominatedPair("zero balls are nested") from None
    mapper = _Mapper(cs, np.array([zp.center, zq.center]), np.array([zp.radius, zq.radius]))
    pieces = _intervals(mapper, 0, curve, -S_MAX, S_MAX)
    if len(pieces) != 1:
        raise FunkError("weighted bisector does not cross the slice exactly once")
    s0, s1 = pieces[0]
    s, pts = flatten_curve(lambda x: mapper(0, curve(x)), s0, s1, 1e-10 * cs.radius, n0=257)
    # u is the endpoint with p', u, q' in clockwise order
    a, b = wp.position, wq.position
    cross = lambda e: (e[0] - a[0]) * (b[1] - a[1]) - (e[1] - a[1]) * (b[0] - a[0])
    if cross(pts[0]) < 0:
        s, pts = s[::-1], pts[::-1]
    arc = np.r_[0.0, np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))]
    return CircumcenterSetup(cone, direction, cs, sites, wp, wq, r_point, zp, zq,
                             curve, mapper, s, arc)


def pencil(setup: CircumcenterSetup, t: float) -> PencilBall:
    """Ball of the pencil at arc-length fraction ``t`` along the bisector."""
    x = setup.center(t)
    return PencilBall(float(t), x, float(setup.radius(x)))


@dataclass(frozen=True, eq=False)
class Circumcenter:
    representative: np.ndarray
    ray: np.ndarray
    radius: float
    t: float
    circle_center: np.ndarray    # centre of the tangent circle in the plane of the zero balls


@dataclass(frozen=True, eq=False)
class Classification:
    label: RegionLabel
    circumcenters: list
    end_signs: tuple = (0, 0)


def _roots(g, t, vals, tol=ROOT_TOL):
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    roots = []
    for k in idx:
        lo, hi = t[k], t[k + 1]
        glo = vals[k]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            gm = float(g(mid))
            if np.sign(gm) == np.sign(glo):
                lo, glo = mid, gm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots


def _check_tangency(vals):
    a = np.abs(vals)
    inner = (a[1:-1] <= a[:-2]) & (a[1:-1] <= a[2:]) & (a[1:-1] < 1e-9)
    same = np.sign(vals[:-2]) == np.sign(vals[2:])
    if np.any(inner & same):
        raise DegenerateTangency("the pencil grazes r: r lies on a region boundary")


def classify(setup: CircumcenterSetup, samples: int = SAMPLES) -> Classification:
    """Region of ``r`` and the circumcenters of the triple."""
    cs = setup.cross_section
    r = setup.r_point
    for zb in (setup.zp, setup.zq):
        if np.linalg.norm(r - zb.center) < zb.radius:
            return Classification(RegionLabel.Z0, [])
    t = np.linspace(EPS, 1 - EPS, samples)
    vals = setup.g(t)
    _check_tangency(vals)
    roots = _roots(setup.g, t, vals)
    ends = (int(np.sign(vals[0])), int(np.sign(vals[-1])))
    if len(roots) > 2:
        raise DegenerateTangency("more than two sign changes along the pencil")
    if len(roots) == 0:
        if ends[0] != ends[1]:
            raise DegenerateTangency("end signs differ without a root")
        label = RegionLabel.Z1 if ends[0] < 0 else RegionLabel.W
    else:
        label = RegionLabel.B1 if len(roots) == 1 else RegionLabel.Z2
    centers = []
    for tr in roots:
        ball = pencil(setup, tr)
        cc = setup.curve(setup.s_of(tr))
        centers.append(Circumcenter(ball.center, lift_to_ray(cs, ball.center), ball.radius, tr, cc))
    return Classification(label, centers, ends)
