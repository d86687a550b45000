"""Funk Voronoi diagrams on a polygonal slice of a polyhedral cone.

With ``E_k(x)`` the distance from ``x`` to the line of edge ``k`` of Omega,

    forward:  F(p, x) = ln max_k E_k(p) / E_k(x)
    reverse:  F(x, p) = ln max_k E_k(x) / E_k(p)

and the maximising edge is constant on the sectors cut out by the site's
spokes.  Inside one sector of both sites the weighted bisector is a straight
line, so bisectors are polylines that bend only where they cross spokes.

The region where site ``i`` is at least as close as site ``j`` is a union of
``m`` convex polygons (one per active edge of ``j``), each an intersection of
half-planes.  Cells are assembled from these regions with exact polygon
Booleans while inserting the sites in a seeded random order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import Point, Polygon

from .core_metric import FORWARD, REVERSE, Cone, Direction, prune_dominated
from .cross_section import DEFAULT_MARGIN, CrossSection, choose_cross_section, lift_to_ray, project_site
from .errors import (
    DominatedPair,
    EmptySiteSet,
    FunkError,
    GeneralPositionViolation,
    NotInterior,
    OnSpoke,
    TraceStall,
    UnsupportedDimension,
)
from .planar import rasterize, points_in_polygon

SPOKE_TOL = 1e-12
DEFAULT_SEED = 42


# ---------------------------------------------------------------------------
# polygon distance kernel


@dataclass(frozen=True, eq=False)
class PolygonDomain:
    """Convex polygon with CCW vertices; edge ``k`` joins ``v[k]`` and ``v[k+1]``."""

    vertices: np.ndarray

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def forms(self) -> tuple[np.ndarray, np.ndarray]:
        v = self.vertices
        d = np.roll(v, -1, axis=0) - v
        n = np.c_[-d[:, 1], d[:, 0]]
        n = n / np.linalg.norm(n, axis=1, keepdims=True)
        return n, -np.sum(n * v, axis=1)

    def E(self, x) -> np.ndarray:
        """Distances ``(..., m)`` to every edge line (positive inside)."""
        n, c = self.forms
        return np.asarray(x, dtype=float) @ n.T + c

    def contains(self, x, strict: bool = True):
        e = self.E(x).min(axis=-1)
        return e > SPOKE_TOL if strict else e >= 0

    @property
    def scale(self) -> float:
        return float(np.ptp(self.vertices, axis=0).max())

    @classmethod
    def of(cls, omega) -> "PolygonDomain":
        if isinstance(omega, PolygonDomain):
            return omega
        if isinstance(omega, CrossSection):
            return cls(np.asarray(omega.vertices, dtype=float))
        v = np.asarray(omega, dtype=float)
        x, y = v[:, 0], v[:, 1]
        if np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) < 0:
            v = v[::-1]
        return cls(v)


def polygon_distance(omega, p, x, direction=FORWARD):
    """Funk distance of the open polygon, vectorised over ``x``."""
    dom = PolygonDomain.of(omega)
    ep, ex = dom.E(p), dom.E(x)
    ratio = ep / ex if Direction.parse(direction) is FORWARD else ex / ep
    return np.log(ratio.max(axis=-1))


def _active(dom: PolygonDomain, p, x, direction: Direction):
    ep, ex = dom.E(p), dom.E(x)
    ratio = ep / ex if direction is FORWARD else ex / ep
    return np.argmax(ratio, axis=-1)


# ---------------------------------------------------------------------------
# spokes


@dataclass(frozen=True, eq=False)
class SpokeSet:
    site: np.ndarray
    directions: np.ndarray    # (m, 2) unit rays, CCW order
    vertex_index: np.ndarray  # polygon vertex each spoke is tied to
    direction: Direction

    def sector(self, q) -> int:
        """Index ``k`` of the sector between spokes ``k`` and ``k+1`` holding ``q``."""
        d = np.asarray(q, dtype=float) - self.site
        ang = np.arctan2(self.directions[:, 1], self.directions[:, 0])
        a = np.arctan2(d[1], d[0])
        rel = (a - ang[0]) % (2 * np.pi)
        rels = (ang - ang[0]) % (2 * np.pi)
        return int(np.searchsorted(rels, rel, side="right") - 1)


def spokes(omega, p, direction=FORWARD) -> SpokeSet:
    """Rays from ``p`` toward (forward) or away from (reverse) each vertex."""
    dom = PolygonDomain.of(omega)
    direction = Direction.parse(direction)
    p = np.asarray(p, dtype=float)
    if not dom.contains(p):
        raise NotInterior("site not interior to the polygon")
    d = dom.vertices - p if direction is FORWARD else p - dom.vertices
    d = d / np.linalg.norm(d, axis=1, keepdims=True)
    order = np.argsort(np.arctan2(d[:, 1], d[:, 0]), kind="stable")
    # start at the spoke of vertex 0 so sector k follows edge order
    k0 = int(np.nonzero(order == 0)[0][0])
    order = np.roll(order, -k0)
    return SpokeSet(p, d[order], order, direction)


def active_edge(omega, spoke_set: SpokeSet, q) -> int:
    """Edge of Omega that realises the distance from the spoke site to ``q``."""
    dom = PolygonDomain.of(omega)
    q = np.asarray(q, dtype=float)
    p = spoke_set.site
    if not dom.contains(q):
        raise NotInterior("query point not interior to the polygon")
    d = q - p
    nd = np.linalg.norm(d)
    if nd == 0:
        raise FunkError("query coincides with the site")
    cr = spoke_set.directions[:, 0] * d[1] - spoke_set.directions[:, 1] * d[0]
    on = (np.abs(cr) <= SPOKE_TOL * nd) & (spoke_set.directions @ d > 0)
    if on.any():
        raise OnSpoke("query point lies on a spoke", (int(np.argmax(on)),))
    k = spoke_set.sector(q)
    # forward sector between spokes to v_k, v_k+1 exits through edge k;
    # reverse spokes point away, so that sector faces the opposite edge
    a, b = spoke_set.vertex_index[k], spoke_set.vertex_index[(k + 1) % dom.m]
    if (b - a) % dom.m == 1:
        return int(a)
    return int(_active(dom, p, q, spoke_set.direction))


# ---------------------------------------------------------------------------
# bisector tracing


@dataclass(frozen=True, eq=False)
class PiecewiseBisector:
    sites: tuple
    points: np.ndarray        # polyline vertices, both ends on the boundary
    edge_pairs: list          # (E_i, E_j) active edges of each segment

    @property
    def segments(self) -> int:
        return len(self.points) - 1


def _gap(dom, s1, w1, s2, w2, x, direction):
    return (polygon_distance(dom, s1, x, direction) + w1) - (polygon_distance(dom, s2, x, direction) + w2)


def _line(dom, s1, w1, a, s2, w2, b, direction):
    """Normal and offset of the bisector line for active edges ``a`` (s1), ``b`` (s2)."""
    n, c = dom.forms
    e1, e2 = dom.E(s1)[a], dom.E(s2)[b]
    if direction is FORWARD:
        # e^{w1} E_a(s1) E_b(x) = e^{w2} E_b(s2) E_a(x)
        al, be = np.exp(w1) * e1, np.exp(w2) * e2
        return al * n[b] - be * n[a], al * c[b] - be * c[a]
    # E_a(x) / E_a(s1) e^{w1} = E_b(x) / E_b(s2) e^{w2}
    al, be = np.exp(w1) / e1, np.exp(w2) / e2
    return al * n[a] - be * n[b], al * c[a] - be * c[b]


def _ray_hits(x, d, origins, dirs):
    """Parameters ``t > 0`` where ``x + t d`` crosses rays ``origins + tau dirs`` (tau > 0)."""
    den = d[0] * dirs[:, 1] - d[1] * dirs[:, 0]
    w = origins - x
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (w[:, 0] * dirs[:, 1] - w[:, 1] * dirs[:, 0]) / den
        tau = (w[:, 0] * d[1] - w[:, 1] * d[0]) / den
    ok = (np.abs(den) > 1e-300) & (tau > 0)
    return np.where(ok, t, np.inf)


def _boundary_hit(dom, x, d):
    n, c = dom.forms
    nd = n @ d
    with np.errstate(divide="ignore"):
        t = -(n @ x + c) / nd
    return float(np.min(np.where(nd < 0, t, np.inf)))


def _trace(dom, s1, w1, s2, w2, start, sign, direction, limit):
    sp1 = spokes(dom, s1, direction)
    sp2 = spokes(dom, s2, direction)
    origins = np.vstack([np.repeat(s1[None], dom.m, 0), np.repeat(s2[None], dom.m, 0)])
    dirs = np.vstack([sp1.directions, sp2.directions])
    eps = 1e-9 * dom.scale
    x = start
    a = int(_active(dom, s1, x, direction))
    b = int(_active(dom, s2, x, direction))
    normal, _ = _line(dom, s1, w1, a, s2, w2, b, direction)
    d = sign * np.array([-normal[1], normal[0]]) / np.linalg.norm(normal)
    pts, pairs = [x], []
    for _ in range(4 * limit):
        tb = _boundary_hit(dom, x, d)
        th = _ray_hits(x, d, origins, dirs)
        th = np.where(th > eps, th, np.inf)
        k = int(np.argmin(th))
        if th[k] >= tb - eps:
            pts.append(x + tb * d)
            pairs.append((a, b))
            return pts, pairs
        x = x + th[k] * d
        probe = x + eps * d
        na = int(_active(dom, s1, probe, direction))
        nb = int(_active(dom, s2, probe, direction))
        if (na, nb) == (a, b):
            continue
        normal, _ = _line(dom, s1, w1, na, s2, w2, nb, direction)
        nd = d
        if np.linalg.norm(normal) > 1e-12:
            nd = np.array([-normal[1], normal[0]]) / np.linalg.norm(normal)
            sd = dirs[k]
            side = lambda v: sd[0] * v[1] - sd[1] * v[0]
            if side(nd) * side(d) < 0:
                nd = -nd
        # otherwise both sites share an active edge at equal weighted height:
        # the gap vanishes on the whole sector, so keep going straight
        if abs(nd[0] * d[1] - nd[1] * d[0]) > 1e-14:
            pts.append(x)
            pairs.append((a, b))
            if len(pairs) > limit:
                break
        a, b, d = na, nb, nd
    raise TraceStall("bisector tracing exceeded its segment budget")


def weighted_bisector(omega, site1, site2, direction=FORWARD, indices=(0, 1)) -> PiecewiseBisector:
    """Bisector of two weighted sites ``(s, w)`` as a boundary-to-boundary polyline."""
    dom = PolygonDomain.of(omega)
    direction = Direction.parse(direction)
    (s1, w1), (s2, w2) = site1, site2
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    for s in (s1, s2):
        if not dom.contains(s):
            raise NotInterior("site not interior to the polygon")
    g = lambda t: float(_gap(dom, s1, w1, s2, w2, s1 + t * (s2 - s1), direction))
    if g(0.0) >= 0 or g(1.0) <= 0:
        raise DominatedPair("one weighted site dominates the other")
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    seed = s1 + 0.5 * (lo + hi) * (s2 - s1)
    limit = 4 * dom.m + 8
    fwd, pf = _trace(dom, s1, w1, s2, w2, seed, 1.0, direction, limit)
    bwd, pb = _trace(dom, s1, w1, s2, w2, seed, -1.0, direction, limit)
    pts = np.array(bwd[::-1] + fwd[1:])
    pairs = pb[::-1] + pf
    # the seed splits one segment in two: merge them
    j = len(bwd) - 1
    if 0 < j < len(pts) - 1:
        pts = np.delete(pts, j, axis=0)
        pairs = pairs[: j - 1] + pairs[j:]
    if len(pairs) > limit:
        raise TraceStall("bisector tracing exceeded its segment budget")
    return PiecewiseBisector(tuple(indices), pts, pairs)


# ---------------------------------------------------------------------------
# cells


def _halfplanes(dom: PolygonDomain, A, B, direction: Direction):
    """Region ``{d_i <= d_j}`` as a list of convex polygons.

    Forward: ``max_k A_k / E_k <= max_l B_l / E_l``; reverse: ``max_k E_k / A_k <= max_l E_l / B_l``.
    """
    n, c = dom.forms
    box = Polygon(dom.vertices)
    grid = 1e-13 * dom.scale
    parts = []
    for l in range(dom.m):
        # each constraint written as  N . x + C <= 0
        if direction is FORWARD:
            N = A[:, None] * n[l][None] - B[l] * n
            C = A * c[l] - B[l] * c
        else:
            N = B[l] * n - A[:, None] * n[l][None]
            C = B[l] * c - A * c[l]
        poly = _clip(dom.vertices, N, C)
        if len(poly) >= 3:
            # slivers may come back as a collection with stray lines
            piece = _polygonal(shapely.make_valid(Polygon(poly)), grid)
            if piece.area > 1e-14 * dom.scale ** 2:
                parts.append(piece)
    out = shapely.union_all(parts, grid_size=grid) if parts else Polygon()
    return _polygonal(out.intersection(box, grid_size=grid), grid)


def _clip(poly, N, C):
    """Sutherland-Hodgman clip of a convex polygon by ``N_k . x + C_k <= 0``."""
    pts = np.asarray(poly, dtype=float)
    for nk, ck in zip(N, C):
        if len(pts) == 0:
            break
        if np.linalg.norm(nk) <= 1e-300:
            if ck > 0:
                return np.zeros((0, 2))
            continue
        val = pts @ nk + ck
        out = []
        for i in range(len(pts)):
            p, q = pts[i], pts[(i + 1) % len(pts)]
            vp, vq = val[i], val[(i + 1) % len(pts)]
            if vp <= 0:
                out.append(p)
            if (vp < 0 < vq) or (vq < 0 < vp):
                out.append(p + (vp / (vp - vq)) * (q - p))
        pts = np.array(out).reshape(-1, 2)
    return pts


def _coefficients(dom, s, w, direction):
    e = dom.E(s)
    return np.exp(w) * e if direction is FORWARD else np.exp(-w) * e


def _polygonal(geom, grid: float):
    """Polygonal part of a Boolean result, snapped to ``grid``."""
    parts = [g for g in shapely.get_parts(geom) if g.geom_type in ("Polygon", "MultiPolygon")]
    parts = [q for g in parts for q in shapely.get_parts(g) if not q.is_empty and q.area > 0]
    if not parts:
        return Polygon()
    return shapely.union_all(parts, grid_size=grid)


def _largest(geom, anchor):
    polys = [g for g in shapely.get_parts(geom) if g.geom_type == "Polygon" and not g.is_empty]
    if not polys:
        return Polygon()
    pt = Point(anchor)
    hold = [g for g in polys if g.distance(pt) <= 1e-12]
    return max(hold or polys, key=lambda g: g.area)


@dataclass(frozen=True, eq=False)
class PolygonalVertex:
    point: np.ndarray
    ray: np.ndarray
    triple: tuple


@dataclass(frozen=True, eq=False)
class PolygonalFunkDiagram:
    direction: Direction
    cone: Cone
    cross_section: CrossSection
    sites: np.ndarray
    weighted: list
    cells: dict                   # original index -> (k, 2) CCW polygon
    vertices: list
    bisectors: list               # PiecewiseBisector of neighbouring cells
    dominated: list
    insertion_order: list
    domain: PolygonDomain = field(repr=False, default=None)

    def label_grid(self, xs, ys) -> np.ndarray:
        return rasterize(sorted(self.cells.items()), xs, ys)

    def locate(self, q) -> np.ndarray:
        q = np.atleast_2d(np.asarray(q, dtype=float))
        out = np.full(len(q), -1)
        for i, poly in sorted(self.cells.items()):
            inside = points_in_polygon(q, poly)
            out = np.where(inside & (out == -1), i, np.where(inside, -2, out))
        return out


def _polygon_array(poly: Polygon) -> np.ndarray:
    if poly.is_empty:
        return np.zeros((0, 2))
    poly = shapely.geometry.polygon.orient(poly, 1.0)
    return np.asarray(poly.exterior.coords, dtype=float)[:-1]


def build_polygonal_voronoi(cone: Cone, sites, direction=FORWARD, seed: int = DEFAULT_SEED,
                            margin: float = DEFAULT_MARGIN) -> PolygonalFunkDiagram:
    """Forward or reverse Funk Voronoi diagram of ``sites`` in a polyhedral cone."""
    if cone.dim != 3:
        raise UnsupportedDimension("only 3-dimensional cones are supported")
    if cone.kind != "polyhedral":
        raise FunkError("cone must be polyhedral; use the elliptical pipeline")
    direction = Direction.parse(direction)
    pts = np.asarray(sites, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise EmptySiteSet("no sites")
    cs = choose_cross_section(cone, pts, direction, margin)
    dom = PolygonDomain.of(cs)
    kept, removed = prune_dominated(cone, pts, direction)
    weighted = {i: project_site(cone, cs, pts[i], direction, origin_index=i) for i in kept}
    coef = {i: _coefficients(dom, weighted[i].position, weighted[i].weight, direction) for i in kept}

    order = [kept[k] for k in np.random.default_rng(seed).permutation(len(kept))]
    box = Polygon(dom.vertices)
    grid = 1e-13 * dom.scale
    cells: dict[int, object] = {}
    for i in order:
        region = box
        for j in list(cells):
            region = _polygonal(region.intersection(_halfplanes(dom, coef[i], coef[j], direction), grid_size=grid), grid)
            cells[j] = _polygonal(cells[j].intersection(_halfplanes(dom, coef[j], coef[i], direction), grid_size=grid), grid)
        cells[i] = region
    polys = {i: _largest(cells[i], weighted[i].position) for i in kept}
    out_cells = {i: _polygon_array(polys[i]) for i in sorted(kept)}

    # neighbours share a boundary of positive length
    bisectors = []
    scale = dom.scale
    for a_i, i in enumerate(sorted(kept)):
        for j in sorted(kept)[a_i + 1:]:
            shared = polys[i].boundary.intersection(polys[j].buffer(1e-9 * scale))
            if shared.length < 1e-7 * scale:
                continue
            wi, wj = weighted[i], weighted[j]
            bisectors.append(weighted_bisector(dom, (wi.position, wi.weight), (wj.position, wj.weight),
                                               direction, (i, j)))

    vertices = _vertices(out_cells, scale, cs, dom)
    return PolygonalFunkDiagram(direction, cone, cs, pts, [weighted[i] for i in sorted(kept)],
                                out_cells, vertices, bisectors, removed, order, dom)


def _vertices(cells: dict, scale: float, cs: CrossSection, dom: PolygonDomain) -> list:
    """Interior points where three cells meet, read off the cell polygons.

    Several bisectors may end at one corner of Omega; such points are skipped.
    """
    tol = 1e-8 * scale
    pts, owners = [], []
    for i, poly in cells.items():
        for p in poly:
            pts.append(p)
            owners.append(i)
    if not pts:
        return []
    pts = np.array(pts)
    owners = np.array(owners)
    seen = np.zeros(len(pts), dtype=bool)
    out = []
    for k in range(len(pts)):
        if seen[k]:
            continue
        near = np.linalg.norm(pts - pts[k], axis=1) <= tol
        seen |= near
        who = tuple(sorted(set(owners[near].tolist())))
        p = pts[near].mean(axis=0)
        if len(who) >= 3 and dom.E(p).min() > tol:
            out.append(PolygonalVertex(p, lift_to_ray(cs, p), who))
    out.sort(key=lambda v: v.triple)
    return out
