"""Additively weighted (Apollonius) Voronoi diagrams of disks in the plane.

The distance from a query ``q`` to the weighted point ``(c, w)`` is
``|q - c| - w``.  Vertices are circles tangent to three grown disks, edges are
branches of hyperbolae with foci at the two centres.

Construction enumerates every triple and keeps the tritangent circles that
are empty of other sites; ties (four or more cotangent disks, collinear
equal-weight triples) are broken by an index-scaled weight perturbation so
the combinatorics are always well defined and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateTriple
from .planar import flatten_curve, points_in_polygon

PERTURBATION = 1e-10
#: parameter clamp for unbounded hyperbola branches; cosh(40) ~ 1e17
S_MAX = 40.0


@dataclass(frozen=True)
class WeightedPoint:
    center: tuple
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(x) for x in self.center))
        object.__setattr__(self, "weight", float(self.weight))
        if not np.isfinite(self.weight):
            raise ValueError("weight must be finite")


@dataclass(frozen=True)
class TangentCircle:
    """Circle tangent to three grown disks.

    ``radius`` is the common additively weighted distance of the centre to the
    defining sites; it is negative when the circle sits inside overlapping
    disks (internal tangency).
    """

    center: np.ndarray
    radius: float
    triple: tuple


def apollonius_distance(s: WeightedPoint, q) -> np.ndarray | float:
    q = np.asarray(q, dtype=float)
    d = np.hypot(q[..., 0] - s.center[0], q[..., 1] - s.center[1]) - s.weight
    return float(d) if np.ndim(d) == 0 else d


# ---------------------------------------------------------------------------
# tritangent circles


def _tritangent_batch(C: np.ndarray, W: np.ndarray):
    """Vectorised tritangent circles for ``T`` triples.

    ``C`` is ``(T, 3, 2)``, ``W`` is ``(T, 3)``.  Returns ``centers (T, 2, 2)``,
    ``radii (T, 2)``, ``ok (T, 2)`` and ``degenerate (T,)``.
    """
    c1 = C[:, 0]
    d = C[:, 1:] - c1[:, None, :]                  # (T, 2, 2)
    dw = W[:, 1:] - W[:, :1]                       # (T, 2)
    # unknowns (x', y', rho): x' = x - c1, rho = r + w1
    M = 2.0 * np.concatenate([d, dw[..., None]], axis=-1)   # (T, 2, 3)
    rhs = np.sum(d * d, axis=-1) - dw * dw                   # (T, 2)
    n = np.cross(M[:, 0], M[:, 1])                           # (T, 3)
    row_scale = np.linalg.norm(M[:, 0], axis=1) * np.linalg.norm(M[:, 1], axis=1)
    degenerate = np.linalg.norm(n, axis=1) <= 1e-12 * np.maximum(row_scale, 1e-300)
    G = M @ np.swapaxes(M, 1, 2)                              # (T, 2, 2)
    G[degenerate] = np.eye(2)
    p0 = np.einsum("tij,ti->tj", M, np.linalg.solve(G, rhs[..., None])[..., 0])
    nn = n / np.maximum(np.linalg.norm(n, axis=1, keepdims=True), 1e-300)
    qa = nn[:, 0] ** 2 + nn[:, 1] ** 2 - nn[:, 2] ** 2
    qb = 2.0 * (p0[:, 0] * nn[:, 0] + p0[:, 1] * nn[:, 1] - p0[:, 2] * nn[:, 2])
    qc = p0[:, 0] ** 2 + p0[:, 1] ** 2 - p0[:, 2] ** 2
    disc = qb * qb - 4 * qa * qc
    scale = np.maximum(qb * qb, np.abs(4 * qa * qc))
    real = disc >= -1e-14 * scale
    sq = np.sqrt(np.maximum(disc, 0.0))
    lin = np.abs(qa) <= 1e-14 * np.maximum(np.abs(qb), 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        # stable pair of roots
        qq = -0.5 * (qb + np.where(qb >= 0, sq, -sq))
        t1 = np.where(lin, -qc / qb, qq / qa)
        t2 = np.where(lin, np.nan, qc / qq)
        t2 = np.where(np.abs(qq) > 0, t2, np.where(lin, np.nan, -qb / (2 * qa)))
    ts = np.stack([t1, t2], axis=1)                          # (T, 2)
    ts[degenerate] = np.nan
    Z = p0[:, None, :] + ts[..., None] * nn[:, None, :]       # (T, 2, 3)
    centers = Z[..., :2] + c1[:, None, :]
    rho = Z[..., 2]
    radii = rho - W[:, :1]
    # each grown-disk distance must be non-negative: r + w_k >= 0
    with np.errstate(invalid="ignore"):
        grown = radii[..., None] + W[:, None, :] >= -1e-12 * (1 + np.abs(rho[..., None]))
    ok = np.isfinite(rho)[..., None] & grown
    ok = np.all(ok, axis=-1) & real[:, None] & ~degenerate[:, None]
    # a double root appears twice: keep one
    with np.errstate(invalid="ignore"):
        same = ok[:, 0] & ok[:, 1] & (np.abs(ts[:, 0] - ts[:, 1]) <= 1e-12 * (1 + np.abs(ts[:, 0])))
    ok[same, 1] = False
    return centers, radii, ok, degenerate


def tritangent_circles(s1: WeightedPoint, s2: WeightedPoint, s3: WeightedPoint):
    """All circles tangent to the three grown disks (0, 1 or 2 of them).

    Raises DegenerateTriple when the tangency locus is not a finite set
    (collinear centres with equal weights).
    """
    C = np.array([[s.center for s in (s1, s2, s3)]], dtype=float)
    W = np.array([[s.weight for s in (s1, s2, s3)]], dtype=float)
    centers, radii, ok, deg = _tritangent_batch(C, W)
    if deg[0]:
        raise DegenerateTriple("collinear centres with equal weights")
    return [TangentCircle(centers[0, k], float(radii[0, k]), (0, 1, 2))
            for k in range(2) if ok[0, k]]


# ---------------------------------------------------------------------------
# the diagram


@dataclass(frozen=True, eq=False)
class Hyperbola:
    """Branch ``{x : |x-c_i| - w_i = |x-c_j| - w_j}`` as
    ``m + a cosh(s) u + b sinh(s) v``; increasing ``s`` runs CCW around ``c_i``.
    """

    i: int
    j: int
    m: np.ndarray
    u: np.ndarray
    v: np.ndarray
    a: float
    b: float

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return (self.m + (self.a * np.cosh(s))[..., None] * self.u
                + (self.b * np.sinh(s))[..., None] * self.v)

    def param(self, x) -> np.ndarray:
        return np.arcsinh(np.dot(np.asarray(x, dtype=float) - self.m, self.v) / self.b)

    def asymptote(self, sign: int) -> np.ndarray:
        d = self.a * self.u + sign * self.b * self.v
        return d / np.linalg.norm(d)

    def conic(self) -> np.ndarray:
        """Coefficients ``(A, B, C, D, E, F)`` of ``A x^2 + B xy + C y^2 + D x + E y + F = 0``."""
        Q = self.b ** 2 * np.outer(self.u, self.u) - self.a ** 2 * np.outer(self.v, self.v)
        m = self.m
        Qm = Q @ m
        return np.array([Q[0, 0], 2 * Q[0, 1], Q[1, 1], -2 * Qm[0], -2 * Qm[1],
                         m @ Qm - self.a ** 2 * self.b ** 2])


def make_hyperbola(ci, wi, cj, wj, i=0, j=1) -> Hyperbola:
    ci = np.asarray(ci, dtype=float)
    cj = np.asarray(cj, dtype=float)
    f = float(np.linalg.norm(cj - ci))
    a = 0.5 * (wi - wj)
    if f <= abs(2 * a):
        raise DegenerateTriple("one disk contains the other: no bisector")
    u = (cj - ci) / f
    v = np.array([-u[1], u[0]])
    b = float(np.sqrt((0.5 * f) ** 2 - a * a))
    return Hyperbola(i, j, 0.5 * (ci + cj), u, v, a, b)


@dataclass(frozen=True, eq=False)
class Edge:
    """Piece ``s0 <= s <= s1`` of the (i, j) bisector; infinite ends allowed."""

    i: int
    j: int
    curve: Hyperbola
    s0: float
    s1: float
    v0: int | None
    v1: int | None

    def point(self, s) -> np.ndarray:
        return self.curve(s)

    def end_point(self, end: int) -> np.ndarray | None:
        """Finite endpoint (0 = start, 1 = end) or None at infinity."""
        s = self.s0 if end == 0 else self.s1
        return None if not np.isfinite(s) else self.curve(s)


@dataclass(frozen=True)
class Piece:
    """An edge seen from one of its cells, oriented CCW around that cell's site."""

    edge: int
    s_start: float
    s_end: float
    v_start: int | None
    v_end: int | None


@dataclass(frozen=True, eq=False)
class ApolloniusDiagram:
    sites: list
    vertices: list
    edges: list
    cells: dict               # site index -> list of Piece in CCW order
    hidden: list
    weights_used: np.ndarray = field(repr=False)

    @property
    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.sites], dtype=float).reshape(-1, 2)

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.sites], dtype=float)

    def piece_points(self, piece: Piece, tol: float, s_clamp: float = S_MAX):
        e = self.edges[piece.edge]
        a = float(np.clip(piece.s_start, -s_clamp, s_clamp))
        b = float(np.clip(piece.s_end, -s_clamp, s_clamp))
        return flatten_curve(e.curve, a, b, tol)

    def cell_polygon(self, i: int, radius: float | None = None, tol: float | None = None):
        """Cell ``i`` as a polygon, truncated by a circle about its centre.

        Unbounded edges are cut where they leave the disk of ``radius`` around
        ``c_i`` and the gaps are closed along that circle.
        """
        cs = self.centers
        ext = float(np.ptp(cs, axis=0).max()) if len(cs) > 1 else 1.0
        ext = max(ext, float(np.abs(self.weights).max(initial=0.0)), 1e-9)
        radius = 100.0 * ext if radius is None else radius
        tol = 1e-7 * ext if tol is None else tol
        ci = cs[i]
        if i in self.hidden:
            return np.zeros((0, 2))
        pieces = self.cells.get(i, [])
        if not pieces:
            t = np.linspace(0, 2 * np.pi, 721)[:-1]
            return ci + radius * np.c_[np.cos(t), np.sin(t)]
        chunks = []
        for k, pc in enumerate(pieces):
            e = self.edges[pc.edge]
            a, b = pc.s_start, pc.s_end
            a, b = (a if np.isfinite(a) else _cut_param(e.curve, ci, radius, np.sign(a), b),
                    b if np.isfinite(b) else _cut_param(e.curve, ci, radius, np.sign(b), a))
            _, pts = flatten_curve(e.curve, a, b, tol)
            chunks.append(pts)
            nxt = pieces[(k + 1) % len(pieces)]
            if pc.v_end is None or pc.v_end != nxt.v_start:
                end = pts[-1]
                ne = self.edges[nxt.edge]
                ns = nxt.s_start
                ns = ns if np.isfinite(ns) else _cut_param(ne.curve, ci, radius, np.sign(ns), nxt.s_end)
                start = ne.curve(ns)
                t0 = np.arctan2(*(end - ci)[::-1])
                t1 = np.arctan2(*(start - ci)[::-1])
                span = (t1 - t0) % (2 * np.pi)
                k_arc = max(int(span / 0.01), 1)
                tt = t0 + span * np.arange(1, k_arc) / k_arc
                chunks.append(ci + radius * np.c_[np.cos(tt), np.sin(tt)])
        return np.vstack(chunks)

    def locate(self, q, radius: float | None = None) -> np.ndarray:
        """Cell index of each query point via point-in-polygon on the cells."""
        q = np.atleast_2d(np.asarray(q, dtype=float))
        out = np.full(len(q), -1)
        for i in range(len(self.sites)):
            if i in self.hidden:
                continue
            poly = self.cell_polygon(i, radius)
            inside = points_in_polygon(q, poly)
            out = np.where(inside & (out == -1), i, np.where(inside, -2, out))
        return out


def _cut_param(curve: Hyperbola, ci, radius, sign, other):
    """Parameter beyond ``other`` (in direction ``sign``) where the branch is at ``radius`` from ci."""
    other = float(np.clip(other, -S_MAX, S_MAX)) if np.isfinite(other) else 0.0
    g = lambda s: float(np.linalg.norm(curve(s) - ci)) - radius
    lo = other
    if g(lo) >= 0:
        return lo
    hi = lo + sign
    while g(hi) < 0 and abs(hi) < S_MAX:
        hi = lo + 2 * (hi - lo)
    if g(hi) < 0:
        return float(np.clip(hi, -S_MAX, S_MAX))
    return brentq(g, min(lo, hi), max(lo, hi), xtol=1e-14)


def nearest_site(sites, q, tol: float = 1e-12):
    """Index minimising ``|q - c_i| - w_i``, or -1 where the best two tie within ``tol``.

    ``sites`` may be an ApolloniusDiagram or a list of WeightedPoint.
    """
    if isinstance(sites, ApolloniusDiagram):
        sites = sites.sites
    c = np.array([s.center for s in sites], dtype=float).reshape(-1, 2)
    w = np.array([s.weight for s in sites], dtype=float)
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    d = np.linalg.norm(q[:, None, :] - c[None], axis=-1) - w[None]
    idx = np.argmin(d, axis=1)
    if len(sites) > 1:
        part = np.partition(d, 1, axis=1)
        idx = np.where(part[:, 1] - part[:, 0] <= tol, -1, idx)
    return int(idx[0]) if single else idx


def hidden_sites(sites, weights=None) -> list:
    """Sites whose disk is contained in another disk: ``|c_j - c_i| + w_j <= w_i``."""
    c = np.array([s.center for s in sites], dtype=float).reshape(-1, 2)
    w = np.array([s.weight for s in sites], dtype=float) if weights is None else weights
    out = []
    for j in range(len(c)):
        dist = np.linalg.norm(c - c[j], axis=1)
        cont = dist + w[j] <= w
        cont[j] = False
        # identical disks: the lower index survives
        same = (dist == 0) & (w == w[j])
        same[j:] = False
        if cont.any() or same.any():
            out.append(j)
    return out


def build_apollonius(sites, perturbation: float = PERTURBATION) -> ApolloniusDiagram:
    """Apollonius diagram by triple enumeration plus emptiness validation."""
    sites = [s if isinstance(s, WeightedPoint) else WeightedPoint(*s) for s in sites]
    n = len(sites)
    c = np.array([s.center for s in sites], dtype=float).reshape(-1, 2)
    w0 = np.array([s.weight for s in sites], dtype=float)
    ext = max(float(np.ptp(c, axis=0).max()) if n > 1 else 0.0, float(np.abs(w0).max(initial=0)), 1.0)
    w = w0 + perturbation * ext * (np.arange(n) + 1)
    hidden = hidden_sites(sites, w)
    alive = [i for i in range(n) if i not in hidden]

    vertices: list[TangentCircle] = []
    if len(alive) >= 3:
        tri = np.array(list(combinations(alive, 3)), dtype=np.int64)
        for chunk in np.array_split(tri, max(1, len(tri) // 20000 + 1)):
            centers, radii, ok, _ = _tritangent_batch(c[chunk], w[chunk])
            for k in range(2):
                sel = np.nonzero(ok[:, k])[0]
                if not len(sel):
                    continue
                cc = centers[sel, k]
                rr = radii[sel, k]
                d = np.linalg.norm(cc[:, None, :] - c[None, alive, :], axis=-1) - w[None, alive]
                mask = np.ones_like(d, dtype=bool)
                pos = {a: idx for idx, a in enumerate(alive)}
                for row, t in enumerate(chunk[sel]):
                    for a in t:
                        mask[row, pos[a]] = False
                slack = np.where(mask, d - rr[:, None], np.inf).min(axis=1)
                for row in np.nonzero(slack >= -1e-13 * ext)[0]:
                    vertices.append(TangentCircle(cc[row], float(rr[row]), tuple(int(x) for x in chunk[sel][row])))
        vertices = [_unperturb(v, c, w0, ext) for v in vertices]
        vertices.sort(key=lambda v: (v.triple, v.center[0], v.center[1]))

    edges: list[Edge] = []
    by_pair: dict[tuple, list] = {}
    for vi, v in enumerate(vertices):
        for a, b in combinations(v.triple, 2):
            by_pair.setdefault((a, b), []).append(vi)
    for a, b in combinations(alive, 2):
        curve = make_hyperbola(c[a], w[a], c[b], w[b], a, b)
        vids = by_pair.get((a, b), [])
        params = sorted((float(curve.param(vertices[v].center)), v) for v in vids)
        breaks = [(-np.inf, None)] + params + [(np.inf, None)]
        for (s0, v0), (s1, v1) in zip(breaks, breaks[1:]):
            if np.isfinite(s0) and np.isfinite(s1):
                mid = 0.5 * (s0 + s1)
            elif np.isfinite(s0):
                mid = s0 + 1.0
            elif np.isfinite(s1):
                mid = s1 - 1.0
            else:
                mid = 0.0
            x = curve(mid)
            d = np.linalg.norm(x - c[alive], axis=1) - w[alive]
            da = float(np.linalg.norm(x - c[a]) - w[a])
            others = [k for k, idx in enumerate(alive) if idx not in (a, b)]
            if not others or d[others].min() >= da - 1e-13 * ext:
                edges.append(Edge(a, b, curve, s0, s1, v0, v1))

    cells: dict[int, list] = {i: [] for i in alive}
    for ei, e in enumerate(edges):
        cells[e.i].append(Piece(ei, e.s0, e.s1, e.v0, e.v1))
        cells[e.j].append(Piece(ei, e.s1, e.s0, e.v1, e.v0))
    for i in alive:
        cells[i].sort(key=lambda pc: _start_angle(edges[pc.edge].curve, pc.s_start, c[i]))
    return ApolloniusDiagram(sites, vertices, edges, cells, hidden, w)


def _unperturb(v: TangentCircle, c, w0, ext) -> TangentCircle:
    """Re-solve a vertex with the input weights; keep the perturbed one if degenerate."""
    t = list(v.triple)
    centers, radii, ok, _ = _tritangent_batch(c[t][None], w0[t][None])
    best, dist = None, 1e-3 * (ext + abs(v.radius))
    for k in range(2):
        if ok[0, k]:
            d = float(np.linalg.norm(centers[0, k] - v.center))
            if d < dist:
                best, dist = k, d
    if best is None:
        return v
    return TangentCircle(centers[0, best], float(radii[0, best]), v.triple)


def _start_angle(curve: Hyperbola, s: float, ci) -> float:
    if np.isfinite(s):
        d = curve(s) - ci
    else:
        d = curve.asymptote(int(np.sign(s)))
    return float(np.arctan2(d[1], d[0]))
