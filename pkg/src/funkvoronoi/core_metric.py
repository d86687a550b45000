"""Cones, forward/reverse Funk distances, Funk balls and domination.

Every cone has its apex at the origin.  Three families are supported:

* ``circular``: the cone ``z * sin(theta) >= cos(theta) * |(x, y)|`` about +z;
* ``elliptical``: a circular cone pushed through an invertible 3x3 map ``M``;
* ``polyhedral``: ``{x : n_i . x >= 0}`` for inward unit normals ``n_i``
  (works in any dimension; 2-D wedges are polyhedral cones in the plane).

The forward Funk distance is ``F(a, b) = ln inf{beta : beta*b - a in C}`` and
the reverse distance is ``F(b, a)``.  All kernels broadcast over leading array
dimensions, so ``funk_distance(cone, a, b)`` accepts ``(..., d)`` arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from .errors import FunkError, GeneralPositionViolation, NotInterior

#: strict-interior margin, in the unit-normal / unit-axis normalised form
INTERIOR_TOL = 1e-12
#: residual below which a site is treated as lying on another site's cone
GENERAL_POSITION_TOL = 1e-12


class Direction(str, enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"

    @classmethod
    def parse(cls, value) -> "Direction":
        if isinstance(value, Direction):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise FunkError(f"unknown direction {value!r}") from None

    @property
    def opposite(self) -> "Direction":
        return Direction.REVERSE if self is Direction.FORWARD else Direction.FORWARD


FORWARD = Direction.FORWARD
REVERSE = Direction.REVERSE


@dataclass(frozen=True, eq=False)
class Cone:
    """An immutable pointed, full-dimensional convex cone with apex at 0.

    Use the ``circular``, ``elliptical``, ``polyhedral`` and ``from_polygon``
    constructors rather than calling the class directly.
    """

    kind: str
    dim: int
    half_angle: float | None = None
    matrix: np.ndarray | None = None
    inverse: np.ndarray | None = None
    normals: np.ndarray | None = None
    #: cross-section ``C ∩ {z = 1}`` (3-D polyhedral only), CCW vertices
    polygon: np.ndarray | None = field(default=None, repr=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def circular(cls, half_angle: float) -> "Cone":
        half_angle = float(half_angle)
        if not 0.0 < half_angle < np.pi / 2:
            raise FunkError("half angle must lie in (0, pi/2)")
        return cls("circular", 3, half_angle=half_angle)

    @classmethod
    def elliptical(cls, half_angle: float, matrix) -> "Cone":
        base = cls.circular(half_angle)
        m = np.array(matrix, dtype=float).reshape(3, 3)
        if abs(np.linalg.det(m)) < 1e-12:
            raise FunkError("linear map of an elliptical cone must be invertible")
        inv = np.linalg.inv(m)
        m.setflags(write=False)
        inv.setflags(write=False)
        return cls("elliptical", 3, half_angle=base.half_angle, matrix=m, inverse=inv)

    @classmethod
    def polyhedral(cls, normals) -> "Cone":
        n = np.array(normals, dtype=float)
        if n.ndim != 2 or n.shape[0] < n.shape[1] or n.shape[1] not in (2, 3):
            raise FunkError("need at least d facet normals in 2 or 3 dimensions")
        n = n / np.linalg.norm(n, axis=1, keepdims=True)
        d = n.shape[1]
        if np.linalg.matrix_rank(n) < d:
            raise FunkError("cone is not pointed (normals do not span space)")
        # interior nonempty: max t s.t. n_i . x >= t, |x|_inf <= 1
        res = linprog(
            c=np.r_[np.zeros(d), -1.0],
            A_ub=np.c_[-n, np.ones(len(n))],
            b_ub=np.zeros(len(n)),
            bounds=[(-1, 1)] * d + [(None, 1)],
        )
        if not res.success or -res.fun <= 1e-9:
            raise FunkError("cone has empty interior")
        polygon = None
        if d == 3:
            polygon = _section_polygon(n)
        n.setflags(write=False)
        return cls("polyhedral", d, normals=n, polygon=polygon)

    @classmethod
    def from_polygon(cls, vertices) -> "Cone":
        """Polyhedral 3-D cone over a convex polygon placed in the plane z = 1.

        The polygon must contain the origin (so that +z is an interior axis).
        """
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise FunkError("polygon needs at least 3 planar vertices")
        if _signed_area(v) < 0:
            v = v[::-1]
        lifted = np.c_[v, np.ones(len(v))]
        normals = np.cross(lifted, np.roll(lifted, -1, axis=0))
        return cls.polyhedral(normals)

    # -- helpers ------------------------------------------------------------

    @property
    def tan(self) -> float:
        return float(np.tan(self.half_angle))

    def normalize(self, p) -> np.ndarray:
        """Map points into the frame where the cone is circular (identity otherwise)."""
        p = np.asarray(p, dtype=float)
        if self.kind == "elliptical":
            return p @ self.inverse.T
        return p

    def denormalize(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.kind == "elliptical":
            return p @ self.matrix.T
        return p

    @property
    def base(self) -> "Cone":
        """The cone in its normalised frame (circular for elliptical cones)."""
        if self.kind == "elliptical":
            return Cone.circular(self.half_angle)
        return self

    def to_dict(self) -> dict:
        if self.kind == "circular":
            return {"kind": "circular", "half_angle": self.half_angle}
        if self.kind == "elliptical":
            return {"kind": "elliptical", "half_angle": self.half_angle,
                    "matrix": self.matrix.tolist()}
        return {"kind": "polyhedral", "normals": self.normals.tolist()}


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _section_polygon(normals: np.ndarray) -> np.ndarray | None:
    """CCW vertices of ``C ∩ {z = 1}``, or None when +z is not an interior axis."""
    if np.min(normals[:, 2]) <= 1e-12:
        return None
    # n_xy . x + n_z >= 0   <=>   -n_xy . x - n_z <= 0
    halfspaces = np.c_[-normals[:, :2], -normals[:, 2]]
    try:
        hs = HalfspaceIntersection(halfspaces, np.zeros(2))
    except Exception:  # unbounded or degenerate section
        return None
    pts = hs.intersections
    if not np.all(np.isfinite(pts)):
        return None
    order = np.argsort(np.arctan2(pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = [0]
    for i in range(1, len(pts)):
        if np.linalg.norm(pts[i] - pts[keep[-1]]) > 1e-12:
            keep.append(i)
    pts = pts[keep]
    if len(pts) > 1 and np.linalg.norm(pts[0] - pts[-1]) <= 1e-12:
        pts = pts[:-1]
    pts.setflags(write=False)
    return pts


# ---------------------------------------------------------------------------
# membership


def margin(cone: Cone, p) -> np.ndarray:
    """Signed interiority margin: >= 0 on C, > 0 on int C (normalised units)."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != cone.dim:
        raise FunkError(f"expected {cone.dim}-dimensional points, got shape {p.shape}")
    if cone.kind == "polyhedral":
        return np.min(p @ cone.normals.T, axis=-1)
    q = cone.normalize(p)
    th = cone.half_angle
    return q[..., 2] * np.sin(th) - np.cos(th) * np.hypot(q[..., 0], q[..., 1])


def contains(cone: Cone, p, strict: bool = False):
    """True iff ``p`` is in C (or in int C with ``strict``)."""
    m = margin(cone, p)
    out = m > INTERIOR_TOL if strict else m >= 0.0
    return bool(out) if np.ndim(out) == 0 else out


def _require_interior(cone: Cone, *points):
    for p in points:
        if not np.all(margin(cone, p) > INTERIOR_TOL):
            raise NotInterior("site not interior to the cone")


# ---------------------------------------------------------------------------
# distances


def _forward_log_beta(cone: Cone, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if cone.kind == "polyhedral":
        na = a @ cone.normals.T
        nb = b @ cone.normals.T
        return np.log(np.max(na / nb, axis=-1))
    a = cone.normalize(a)
    b = cone.normalize(b)
    # boundary: (beta b_z - a_z) sin = |beta b_xy - a_xy| cos
    s2 = np.sin(cone.half_angle) ** 2
    c2 = np.cos(cone.half_angle) ** 2
    bxy2 = b[..., 0] ** 2 + b[..., 1] ** 2
    axy2 = a[..., 0] ** 2 + a[..., 1] ** 2
    abxy = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]
    qa = s2 * b[..., 2] ** 2 - c2 * bxy2
    qb = -2.0 * (s2 * a[..., 2] * b[..., 2] - c2 * abxy)
    qc = s2 * a[..., 2] ** 2 - c2 * axy2
    disc = qb * qb - 4.0 * qa * qc
    scale = np.maximum(qb * qb, np.abs(4.0 * qa * qc))
    if np.any(disc < -1e-12 * np.maximum(scale, 1.0)):
        raise FunkError("negative discriminant in circular Funk distance")
    sq = np.sqrt(np.maximum(disc, 0.0))
    # larger root of qa*beta^2 + qb*beta + qc, without cancellation
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(qb < 0, (-qb + sq) / (2.0 * qa), 2.0 * qc / (-qb - sq))
    return np.log(beta)


def funk_distance(cone: Cone, a, b, direction=FORWARD):
    """Forward (or reverse) Funk distance between interior points.

    Raises NotInterior if either argument is not strictly inside the cone.
    The value is signed: negative when ``b`` is strictly inside ``C_a``.
    """
    direction = Direction.parse(direction)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _require_interior(cone, a, b)
    if direction is REVERSE:
        a, b = b, a
    a, b = np.broadcast_arrays(a, b)
    out = _forward_log_beta(cone, a, b)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# balls and domination


def ball_apex(cone: Cone, center, radius: float, direction=FORWARD) -> np.ndarray:
    """Apex of the Funk ball: ``e^-rho * c`` (forward) or ``e^rho * c`` (reverse)."""
    direction = Direction.parse(direction)
    center = np.asarray(center, dtype=float)
    _require_interior(cone, center)
    sign = -1.0 if direction is FORWARD else 1.0
    return np.exp(sign * float(radius)) * center


def ball_contains(cone: Cone, center, radius: float, direction, q) -> bool:
    """Membership of ``q`` in the Funk ball of the given radius."""
    direction = Direction.parse(direction)
    apex = ball_apex(cone, center, radius, direction)
    q = np.asarray(q, dtype=float)
    if direction is FORWARD:
        return contains(cone, q - apex)
    return contains(cone, apex - q)


def dominates(cone: Cone, a, b, direction=FORWARD) -> bool:
    """Whether site ``a`` dominates ``b`` (b strictly inside C_a, resp. C^r_a).

    A dominated site has an empty Voronoi cell.  Exact boundary contact is a
    general-position violation and raises rather than picking a side.
    """
    direction = Direction.parse(direction)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _require_interior(cone, a, b)
    diff = b - a if direction is FORWARD else a - b
    res = float(margin(cone, diff))
    if abs(res) <= GENERAL_POSITION_TOL:
        raise GeneralPositionViolation("site lies on the boundary of another site's cone")
    return res > 0.0


def prune_dominated(cone: Cone, sites, direction=FORWARD):
    """Split ``sites`` into (kept, removed) index lists via pairwise domination."""
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float)
    removed = []
    for j in range(len(pts)):
        for i in range(len(pts)):
            if i == j:
                continue
            try:
                dom = dominates(cone, pts[i], pts[j], direction)
            except GeneralPositionViolation as exc:
                raise GeneralPositionViolation(str(exc), (i, j)) from None
            if dom:
                removed.append(j)
                break
    kept = [i for i in range(len(pts)) if i not in removed]
    return kept, removed


def partial_order(cone: Cone, sites) -> list[tuple[int, int]]:
    """All pairs ``(i, j)``, i != j, with ``sites[i] <=_C sites[j]``."""
    pts = np.asarray(sites, dtype=float)
    _require_interior(cone, pts)
    diff = pts[None, :, :] - pts[:, None, :]
    inside = np.asarray(contains(cone, diff))
    return [(i, j) for i in range(len(pts)) for j in range(len(pts))
            if i != j and inside[i, j]]
