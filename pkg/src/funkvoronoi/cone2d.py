"""Funk Voronoi diagrams of point sites in planar cones (wedges).

In two dimensions every bisector is a single ray from the apex, so after
removing dominated sites the diagram is just an angular sort.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_metric import FORWARD, Cone, Direction, prune_dominated, dominates
from .errors import DegenerateOrder, DominatedPair, EmptySiteSet, FunkError


@dataclass(frozen=True, eq=False)
class PlanarCone:
    """Wedge ``{L1 >= 0, L2 >= 0}`` with ``L1 = c1 x + c2 y``, ``L2 = c3 x + c4 y``.

    ``R1 = {L1 = 0}`` and ``R2 = {L2 = 0}`` are its boundary rays.
    """

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if abs(self.c1 * self.c4 - self.c2 * self.c3) < 1e-12:
            raise FunkError("boundary rays of a planar cone must be distinct")

    @property
    def forms(self) -> np.ndarray:
        return np.array([[self.c1, self.c2], [self.c3, self.c4]], dtype=float)

    @property
    def cone(self) -> Cone:
        return Cone.polyhedral(self.forms)

    def L1(self, p):
        p = np.asarray(p, dtype=float)
        return self.c1 * p[..., 0] + self.c2 * p[..., 1]

    def L2(self, p):
        p = np.asarray(p, dtype=float)
        return self.c3 * p[..., 0] + self.c4 * p[..., 1]

    def angular_key(self, p):
        """Increases monotonically from R1 (0) to R2 (+inf) across the wedge."""
        return self.L1(p) / self.L2(p)

    def boundary_rays(self) -> np.ndarray:
        """Unit directions of R1 and R2."""
        out = []
        for (a, b), other in ((self.forms[0], self.forms[1]), (self.forms[1], self.forms[0])):
            d = np.array([-b, a])
            if other @ d < 0:
                d = -d
            out.append(d / np.linalg.norm(d))
        return np.array(out)


def bisector_ray_2d(cone: PlanarCone, p, q, direction=FORWARD) -> np.ndarray:
    """Unit direction of the Funk bisector ray of two sites in a wedge.

    The pair is swapped internally so that ``p`` is the site nearer ``R1``.
    """
    direction = Direction.parse(direction)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c = cone.cone
    if dominates(c, p, q, direction) or dominates(c, q, p, direction):
        raise DominatedPair("one site dominates the other")
    kp, kq = cone.angular_key(p), cone.angular_key(q)
    if abs(kp - kq) <= 1e-12 * max(1.0, abs(kp), abs(kq)):
        raise DegenerateOrder("sites lie on a common ray from the apex")
    if kp > kq:
        p, q = q, p
    f1, f2 = cone.forms
    if direction is FORWARD:
        # L2(x) L1(q) - L1(x) L2(p) = 0
        normal = cone.L1(q) * f2 - cone.L2(p) * f1
    else:
        # L2(x) L1(p) - L1(x) L2(q) = 0
        normal = cone.L1(p) * f2 - cone.L2(q) * f1
    d = np.array([-normal[1], normal[0]])
    d /= np.linalg.norm(d)
    if min(f1 @ d, f2 @ d) < 0:
        d = -d
    if min(f1 @ d, f2 @ d) <= 0:
        raise FunkError("bisector ray left the cone")
    return d


def zero_ball_corner(cone: PlanarCone, p, q, direction=FORWARD) -> np.ndarray:
    """The point ``∂C_p ∩ ∂C_q`` (reflected cones for reverse), p nearer R1."""
    direction = Direction.parse(direction)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if cone.angular_key(p) > cone.angular_key(q):
        p, q = q, p
    if direction is FORWARD:
        rhs = [cone.L1(q), cone.L2(p)]
    else:
        rhs = [cone.L1(p), cone.L2(q)]
    return np.linalg.solve(cone.forms, rhs)


@dataclass(frozen=True, eq=False)
class Diagram2D:
    direction: Direction
    sites: np.ndarray
    order: list          # surviving site indices in angular order R1 -> R2
    rays: np.ndarray     # (len(order) - 1, 2) separating rays
    dominated: list
    cone_rays: np.ndarray = None
    ccw: bool = True

    def locate(self, x) -> np.ndarray:
        """Index of the cell containing each point (by angular comparison)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if len(self.order) == 1:
            return np.full(len(x), self.order[0])
        r1 = self.cone_rays[0]
        ang_x = _angle_from(r1, x)
        ang_r = _angle_from(r1, self.rays)
        k = np.searchsorted(ang_r, ang_x) if self.ccw else np.searchsorted(-ang_r, -ang_x)
        return np.asarray(self.order)[k]


def _angle_from(ref, x):
    x = np.atleast_2d(x)
    return np.arctan2(ref[0] * x[:, 1] - ref[1] * x[:, 0], x @ ref)


def voronoi_2d(cone: PlanarCone, sites, direction=FORWARD) -> Diagram2D:
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptySiteSet("no sites")
    kept, removed = prune_dominated(cone.cone, pts, direction)
    keys = cone.angular_key(pts[kept])
    order = [kept[i] for i in np.argsort(keys, kind="stable")]
    rays = [bisector_ray_2d(cone, pts[a], pts[b], direction) for a, b in zip(order, order[1:])]
    rays = np.array(rays).reshape(-1, 2)
    bnd = cone.boundary_rays()
    # walking from R1 to R2 is counter-clockwise iff cross(R1, R2) > 0
    ccw = bool(bnd[0, 0] * bnd[1, 1] - bnd[0, 1] * bnd[1, 0] > 0)
    return Diagram2D(direction, pts, order, rays, removed, cone_rays=bnd, ccw=ccw)
