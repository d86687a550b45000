"""Reduction of a 3-D cone diagram to a weighted diagram on a planar slice.

Bisectors of Funk Voronoi diagrams in a cone are unions of rays from the apex,
so the whole diagram is determined by its trace on a bounded slice
``Omega = C ∩ {z = h}``.  Each site ``s`` is pushed along its ray onto the
slice (``lambda = h / s_z``) and carries the additive weight ``-ln lambda``
(forward) or ``+ln lambda`` (reverse).

All slice geometry lives in the cone's normalised frame: elliptical cones are
mapped back to their circular base first, so slices are always round disks or
convex polygons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_metric import (
    FORWARD,
    INTERIOR_TOL,
    REVERSE,
    Cone,
    Direction,
    _require_interior,
    funk_distance,
)
from .errors import EmptySiteSet, FunkError, NotInterior, WrongSideOfSection

DEFAULT_MARGIN = 0.05


@dataclass(frozen=True, eq=False)
class CrossSection:
    cone: Cone
    height: float
    direction: Direction
    kind: str  # "disk" or "polygon"
    radius: float | None = None
    vertices: np.ndarray | None = None

    @property
    def frame(self) -> Cone:
        return self.cone.base

    @property
    def center(self) -> np.ndarray:
        return np.zeros(2)

    # -- region queries ---------------------------------------------------

    def edge_forms(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit inward normals ``n_k`` and offsets ``c_k`` with ``n_k.y + c_k >= 0``.

        Edge ``k`` joins ``vertices[k]`` and ``vertices[k+1]``.
        """
        v = self.vertices
        d = np.roll(v, -1, axis=0) - v
        n = np.c_[-d[:, 1], d[:, 0]]
        n /= np.linalg.norm(n, axis=1, keepdims=True)
        c = -np.sum(n * v, axis=1)
        return n, c

    def boundary_margin(self, q) -> np.ndarray:
        """Euclidean distance to the boundary inside Omega (negative outside)."""
        q = np.asarray(q, dtype=float)
        if self.kind == "disk":
            return self.radius - np.hypot(q[..., 0], q[..., 1])
        n, c = self.edge_forms()
        return np.min(q @ n.T + c, axis=-1)

    def contains(self, q, strict: bool = False):
        m = self.boundary_margin(q)
        out = m > INTERIOR_TOL if strict else m >= 0.0
        return bool(out) if np.ndim(out) == 0 else out

    def lift(self, q) -> np.ndarray:
        """Points of the slice plane as 3-D points (normalised frame)."""
        q = np.asarray(q, dtype=float)
        h = np.full(q.shape[:-1] + (1,), self.height)
        return np.concatenate([q, h], axis=-1)

    @property
    def area(self) -> float:
        if self.kind == "disk":
            return float(np.pi * self.radius ** 2)
        v = self.vertices
        return 0.5 * float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        if self.kind == "disk":
            r = self.radius
            return -r, -r, r, r
        v = self.vertices
        return (float(v[:, 0].min()), float(v[:, 1].min()),
                float(v[:, 0].max()), float(v[:, 1].max()))

    @property
    def scale(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return max(x1 - x0, y1 - y0)

    def boundary_point(self, angle) -> np.ndarray:
        """Boundary point hit by the ray from the origin at ``angle``."""
        angle = np.asarray(angle, dtype=float)
        u = np.stack([np.cos(angle), np.sin(angle)], axis=-1)
        if self.kind == "disk":
            return self.radius * u
        n, c = self.edge_forms()
        # n.(t u) + c = 0  ->  t = -c / (n.u), smallest positive
        with np.errstate(divide="ignore"):
            t = -c / (u @ n.T)
        t = np.where(t > 0, t, np.inf)
        return np.min(t, axis=-1)[..., None] * u

    def boundary_arc(self, a, b, tol: float = 1e-7) -> np.ndarray:
        """Points along the boundary going CCW from boundary point ``a`` to ``b``.

        Endpoints included.  Polygon corners are hit exactly; circular arcs are
        flattened to chord deviation ``tol``.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        ta = np.arctan2(a[1], a[0])
        tb = np.arctan2(b[1], b[0])
        span = (tb - ta) % (2 * np.pi)
        if self.kind == "disk":
            step = 2.0 * np.arccos(max(0.0, 1.0 - tol / self.radius))
            k = max(int(np.ceil(span / max(step, 1e-9))), 1)
            mid = ta + span * np.arange(1, k) / k
            inner = self.radius * np.c_[np.cos(mid), np.sin(mid)]
            return np.vstack([a, inner, b])
        v = self.vertices
        tv = (np.arctan2(v[:, 1], v[:, 0]) - ta) % (2 * np.pi)
        sel = (tv > 1e-15) & (tv < span - 1e-15)
        corners = v[sel][np.argsort(tv[sel])]
        return np.vstack([a, corners, b])

    def to_dict(self) -> dict:
        out = {"height": self.height, "direction": self.direction.value, "kind": self.kind}
        if self.kind == "disk":
            out["radius"] = self.radius
        else:
            out["vertices"] = self.vertices.tolist()
        return out


@dataclass(frozen=True)
class WeightedSite:
    position: np.ndarray
    weight: float
    origin_index: int
    lam: float


@dataclass(frozen=True, eq=False)
class ZeroBall:
    kind: str  # "disk" or "polygon"
    center: np.ndarray
    radius: float | None = None
    vertices: np.ndarray | None = None


def _make_section(cone: Cone, h: float, direction: Direction) -> CrossSection:
    frame = cone.base
    if frame.kind == "circular":
        return CrossSection(cone, h, direction, "disk", radius=h * frame.tan)
    if frame.dim != 3 or frame.polygon is None:
        raise FunkError("polyhedral cone needs +z as an interior axis to be sectioned")
    verts = h * np.asarray(frame.polygon)
    verts.setflags(write=False)
    return CrossSection(cone, h, direction, "polygon", vertices=verts)


def section_at(cone: Cone, height: float, direction=FORWARD) -> CrossSection:
    """The slice ``C ∩ {z = height}`` (normalised frame)."""
    if height <= 0:
        raise FunkError("section height must be positive")
    return _make_section(cone, float(height), Direction.parse(direction))


def choose_cross_section(cone: Cone, sites, direction=FORWARD,
                         margin: float = DEFAULT_MARGIN) -> CrossSection:
    """Slice above every site (forward) or below every site (reverse)."""
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise EmptySiteSet("no sites")
    if not margin > 0 or (direction is REVERSE and margin >= 1):
        raise FunkError("margin must be positive (and below 1 for reverse sections)")
    _require_interior(cone, pts)
    z = cone.normalize(pts)[:, 2]
    if direction is FORWARD:
        h = (1.0 + margin) * float(z.max())
    else:
        h = (1.0 - margin) * float(z.min())
    return _make_section(cone, h, direction)


def project_site(cone: Cone, cs: CrossSection, s, direction=None,
                 origin_index: int = -1) -> WeightedSite:
    """Push a site along its apex ray onto the slice and attach its weight."""
    direction = cs.direction if direction is None else Direction.parse(direction)
    s = np.asarray(s, dtype=float)
    _require_interior(cone, s)
    q = cone.normalize(s)
    h = cs.height
    if direction is FORWARD and q[2] > h * (1 + 1e-12):
        raise WrongSideOfSection("site above a forward section")
    if direction is REVERSE and q[2] < h * (1 - 1e-12):
        raise WrongSideOfSection("site below a reverse section")
    lam = h / q[2]
    w = -np.log(lam) if direction is FORWARD else np.log(lam)
    pos = lam * q[:2]
    pos.setflags(write=False)
    return WeightedSite(pos, float(w), origin_index, float(lam))


def zero_ball(cone: Cone, cs: CrossSection, s, direction=None) -> ZeroBall:
    """``C_s ∩ Omega`` (forward) or ``C^r_s ∩ Omega`` (reverse) as exact geometry."""
    direction = cs.direction if direction is None else Direction.parse(direction)
    s = np.asarray(s, dtype=float)
    _require_interior(cone, s)
    q = cone.normalize(s)
    gap = cs.height - q[2]
    if direction is REVERSE:
        gap = -gap
    if gap <= 0:
        raise WrongSideOfSection("zero ball needs the site strictly before the section")
    center = q[:2].copy()
    frame = cone.base
    if frame.kind == "circular":
        return ZeroBall("disk", center, radius=gap * frame.tan)
    sign = 1.0 if direction is FORWARD else -1.0
    verts = center + sign * gap * np.asarray(frame.polygon)
    return ZeroBall("polygon", center, vertices=verts)


def weighted_distance(cs: CrossSection, ws: WeightedSite, q, direction=None):
    """Weighted Funk distance on the slice from a projected site to ``q``."""
    direction = cs.direction if direction is None else Direction.parse(direction)
    q = np.asarray(q, dtype=float)
    if not np.all(cs.contains(q, strict=True)):
        raise NotInterior("query point not interior to the cross-section")
    d = funk_distance(cs.frame, cs.lift(ws.position), cs.lift(q), direction)
    return d + ws.weight


def representative(cs: CrossSection, p) -> np.ndarray:
    """Where the apex ray through ``p`` (original coordinates) meets the slice plane."""
    q = cs.cone.normalize(p)
    if np.any(q[..., 2] <= 0):
        raise FunkError("point is not above the apex")
    return q[..., :2] * (cs.height / q[..., 2])[..., None]


def lift_to_ray(cs: CrossSection, q) -> np.ndarray:
    """Unit direction (original coordinates) of the apex ray through slice point ``q``."""
    d = cs.cone.denormalize(cs.lift(q))
    return d / np.linalg.norm(d, axis=-1, keepdims=True)
