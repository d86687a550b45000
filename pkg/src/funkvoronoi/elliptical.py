"""Funk Voronoi diagrams in 3-D circular and elliptical cones.

Pipeline: slice the cone, turn every site's zero ball on the slice into an
Apollonius site ``(c_i, w_i)``, build the Apollonius diagram and carry its
combinatorics back onto the slice.

The carry-back uses an explicit map.  A point ``c`` of the plane whose
Apollonius distance to its owning site is ``r`` is the centre of a circle
tangent to the grown disks; the cone congruent to ``C^r`` (forward) or ``C``
(reverse) through that circle has apex ``(c, h ± r / tan θ)`` and the apex ray
meets the slice at

    forward:  Phi(c)   = h c / (h + r / tan θ)
    reverse:  Phi_r(c) = h c / (h - r / tan θ),   valid where |c| + r <= R.

``Phi`` maps every Apollonius cell onto the matching Funk cell.  ``Phi_r``
does the same after clipping to ``|c| + r <= R`` (the circle lies in Omega),
and sends that clip curve onto the boundary of Omega.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .apollonius import S_MAX, ApolloniusDiagram, TangentCircle, WeightedPoint, build_apollonius
from .core_metric import FORWARD, REVERSE, Cone, Direction, prune_dominated
from .cross_section import (
    DEFAULT_MARGIN,
    CrossSection,
    WeightedSite,
    choose_cross_section,
    lift_to_ray,
    project_site,
    zero_ball,
)
from .errors import EmptySiteSet, FilteredOut, FunkError, UnsupportedDimension
from .planar import flatten_curve, rasterize, points_in_polygon

FILTER_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FunkVertex:
    representative: np.ndarray   # on Omega, normalised frame
    ray: np.ndarray              # unit direction, original coordinates
    apex: np.ndarray             # apex of the tangent cone, original coordinates
    triple: tuple                # original site indices
    circle: TangentCircle


@dataclass(frozen=True, eq=False)
class FunkEdge:
    sites: tuple                 # original site indices
    chains: list                 # polylines on Omega


@dataclass(frozen=True, eq=False)
class FunkVoronoiDiagram3D:
    direction: Direction
    cone: Cone
    cross_section: CrossSection
    sites: np.ndarray
    weighted: list
    apollonius: ApolloniusDiagram = field(repr=False)
    vertices: list
    edges: list
    cells: dict                  # original site index -> polygon on Omega
    dominated: list

    def label_grid(self, xs, ys) -> np.ndarray:
        """Cell labels at pixel centres ``xs x ys`` of the slice (-1 outside)."""
        return rasterize(sorted(self.cells.items()), xs, ys)

    def locate(self, q) -> np.ndarray:
        q = np.atleast_2d(np.asarray(q, dtype=float))
        out = np.full(len(q), -1)
        for i, poly in sorted(self.cells.items()):
            inside = points_in_polygon(q, poly)
            out = np.where(inside & (out == -1), i, np.where(inside, -2, out))
        return out


# ---------------------------------------------------------------------------
# pipeline steps


def _check_cone(cone: Cone):
    if cone.dim != 3:
        raise UnsupportedDimension("only 3-dimensional cones are supported")
    if cone.kind not in ("circular", "elliptical"):
        raise FunkError("cone must be circular or elliptical; use the polygonal pipeline")


def _setup(cone, sites, direction, margin):
    _check_cone(cone)
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise EmptySiteSet("no sites")
    cs = choose_cross_section(cone, pts, direction, margin)
    kept, removed = prune_dominated(cone, pts, direction)
    weighted, apo = [], []
    for i in kept:
        weighted.append(project_site(cone, cs, pts[i], direction, origin_index=i))
        zb = zero_ball(cone, cs, pts[i], direction)
        apo.append(WeightedPoint(zb.center, zb.radius))
    return cs, weighted, apo, kept, removed


def setup(cone: Cone, sites, direction=FORWARD, margin: float = DEFAULT_MARGIN):
    """Slice, prune dominated sites and form the Apollonius sites of the rest."""
    cs, weighted, apo, _, _ = _setup(cone, sites, direction, margin)
    return cs, weighted, apo


def filter_vertex(cs: CrossSection, circle: TangentCircle, direction=FORWARD) -> bool:
    """Whether an Apollonius vertex carries a Funk vertex in this direction."""
    if Direction.parse(direction) is FORWARD:
        return True
    c = np.asarray(circle.center, dtype=float)
    return bool(np.hypot(c[0], c[1]) + circle.radius <= cs.radius - FILTER_TOL)


def _apex_height(cs: CrossSection, r, direction: Direction):
    g = np.asarray(r, dtype=float) / cs.frame.tan
    return cs.height + g if direction is FORWARD else cs.height - g


def relocate_vertex(cone: Cone, cs: CrossSection, circle: TangentCircle,
                    direction=FORWARD, triple: tuple | None = None) -> FunkVertex:
    """Apex of the cone through the circle, its ray, and its trace on Omega."""
    direction = Direction.parse(direction)
    if not filter_vertex(cs, circle, direction):
        raise FilteredOut("circle is not contained in the cross-section")
    c = np.asarray(circle.center, dtype=float)
    az = float(_apex_height(cs, circle.radius, direction))
    apex = np.array([c[0], c[1], az])
    rep = cs.height * c / az
    return FunkVertex(rep, lift_to_ray(cs, rep), cone.denormalize(apex),
                      circle.triple if triple is None else triple, circle)


# ---------------------------------------------------------------------------
# carrying edges and cells onto Omega


def _site_arrays(apo):
    c = np.array([s.center for s in apo], dtype=float).reshape(-1, 2)
    w = np.array([s.weight for s in apo], dtype=float)
    return c, w


class _Mapper:
    """The map from the Apollonius plane onto Omega for one direction."""

    def __init__(self, cs: CrossSection, centers, weights):
        self.cs = cs
        self.h = cs.height
        self.R = cs.radius
        self.t = cs.frame.tan
        self.c = centers
        self.w = weights
        self.forward = cs.direction is FORWARD

    def r(self, i, x):
        return np.linalg.norm(x - self.c[i], axis=-1) - self.w[i]

    def __call__(self, i, x):
        r = self.r(i, x)
        den = self.h + r / self.t if self.forward else self.h - r / self.t
        return self.h * x / den[..., None]

    def slack(self, i, x):
        """``|x| + r(x) - R``: negative inside the reverse domain."""
        return np.linalg.norm(x, axis=-1) + self.r(i, x) - self.R


def _intervals(mapper: _Mapper, i, curve, a, b):
    """Sub-intervals of ``[a, b]`` (either order) where the curve stays in the domain."""
    lo, hi = min(a, b), max(a, b)
    if mapper.forward:
        out = [(lo, hi)]
    else:
        s = np.linspace(lo, hi, 801)
        g = mapper.slack(i, curve(s))
        f = lambda t: float(mapper.slack(i, curve(t)))
        inside = g < 0
        out = []
        start = lo if inside[0] else None
        for k in range(1, len(s)):
            if inside[k] != inside[k - 1]:
                root = brentq(f, s[k - 1], s[k], xtol=1e-15, rtol=1e-15)
                if inside[k]:
                    start = root
                else:
                    out.append((start, root))
            if k == len(s) - 1 and inside[k]:
                out.append((start, hi))
    if a > b:
        out = [(y, x) for x, y in reversed(out)]
    return out


def _chain(mapper: _Mapper, i, curve, s0, s1, tol):
    _, pts = flatten_curve(lambda s: mapper(i, curve(s)), s0, s1, tol, n0=65)
    return pts


def _clamp(s):
    return float(np.clip(s, -S_MAX, S_MAX))


def _cell_polygon(mapper: _Mapper, diagram: ApolloniusDiagram, k: int, tol: float):
    cs = mapper.cs
    chains = []
    for pc in diagram.cells.get(k, []):
        e = diagram.edges[pc.edge]
        a, b = _clamp(pc.s_start), _clamp(pc.s_end)
        for s0, s1 in _intervals(mapper, k, e.curve, a, b):
            chains.append(_chain(mapper, k, e.curve, s0, s1, tol))
    if not chains:
        return cs.boundary_arc(cs.boundary_point(0.0), cs.boundary_point(2 * np.pi - 1e-9), tol)
    parts = []
    gap = 1e-7 * cs.scale
    for n, ch in enumerate(chains):
        parts.append(ch)
        nxt = chains[(n + 1) % len(chains)]
        if np.linalg.norm(ch[-1] - nxt[0]) > gap:
            arc = cs.boundary_arc(_to_boundary(cs, ch[-1]), _to_boundary(cs, nxt[0]), tol)
            parts.append(arc[1:-1])
    return np.vstack(parts)


def _to_boundary(cs: CrossSection, p):
    return cs.boundary_point(np.arctan2(p[1], p[0]))


# ---------------------------------------------------------------------------


def build_funk_voronoi(cone: Cone, sites, direction=FORWARD,
                       margin: float = DEFAULT_MARGIN, tol: float | None = None) -> FunkVoronoiDiagram3D:
    """Forward or reverse Funk Voronoi diagram of ``sites`` in a round cone.

    ``tol`` is the chord tolerance of cell boundaries on the slice
    (default ``1e-7`` of the slice radius).
    """
    _check_cone(cone)
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float).reshape(-1, 3)
    cs, weighted, apo, kept, removed = _setup(cone, pts, direction, margin)
    tol = 1e-7 * cs.radius if tol is None else tol
    adiag = build_apollonius(apo)
    centers, weights = _site_arrays(apo)
    mapper = _Mapper(cs, centers, weights)

    vertices = []
    for v in adiag.vertices:
        if filter_vertex(cs, v, direction):
            triple = tuple(kept[t] for t in v.triple)
            vertices.append(relocate_vertex(cone, cs, v, direction, triple))

    edges = []
    for e in adiag.edges:
        chains = [_chain(mapper, e.i, e.curve, s0, s1, tol)
                  for s0, s1 in _intervals(mapper, e.i, e.curve, _clamp(e.s0), _clamp(e.s1))]
        if chains:
            edges.append(FunkEdge((kept[e.i], kept[e.j]), chains))

    cells = {}
    for k in range(len(apo)):
        if k in adiag.hidden:
            continue
        cells[kept[k]] = _cell_polygon(mapper, adiag, k, tol)
    return FunkVoronoiDiagram3D(direction, cone, cs, pts, weighted, adiag,
                                vertices, edges, cells, removed)
