"""Brute-force oracles used to cross-check the closed-form kernels.

Nothing here uses the similar-triangles or quadratic-root formulas: distances
come from bisection on the cone membership predicate and labelings from plain
nearest-site scans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_metric import REVERSE, Cone, Direction, _require_interior, contains, funk_distance


def beta_scaling_distance(cone: Cone, a, b, direction="forward", rtol: float = 1e-12):
    """``ln inf{beta : beta*b - a in C}`` by bisection on membership.

    Works elementwise on ``(..., d)`` arrays.
    """
    direction = Direction.parse(direction)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _require_interior(cone, a, b)
    if direction is REVERSE:
        a, b = b, a
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape[:-1]
    a = a.reshape(-1, a.shape[-1])
    b = b.reshape(-1, b.shape[-1])

    def inside(beta):
        return np.asarray(contains(cone, beta[:, None] * b - a))

    hi = np.ones(len(a))
    for _ in range(2000):
        bad = ~inside(hi)
        if not bad.any():
            break
        hi[bad] *= 2.0
    lo = np.ones(len(a))
    for _ in range(2000):
        bad = inside(lo)
        if not bad.any():
            break
        lo[bad] *= 0.5
    for _ in range(200):
        if np.all(hi / lo - 1.0 <= rtol):
            break
        mid = np.sqrt(lo * hi)
        ok = inside(mid)
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out = np.log(hi).reshape(shape)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class GridLabels:
    xs: np.ndarray
    ys: np.ndarray
    labels: np.ndarray   # (len(ys), len(xs)); -1 outside the slice
    gap: np.ndarray      # runner-up minus best distance; inf where one site or outside


def grid_points(cs, resolution: int):
    """Pixel centres covering the slice's bounding box."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    x0, y0, x1, y1 = cs.bbox
    k = (np.arange(resolution) + 0.5) / resolution
    return x0 + k * (x1 - x0), y0 + k * (y1 - y0)


def grid_labeling(cs, weighted_sites, direction=None, resolution: int = 512,
                  exact: bool = False) -> GridLabels:
    """Nearest weighted site at every pixel centre strictly inside the slice.

    Distances are evaluated point by point on the lifted slice.  With
    ``exact=True`` they come from :func:`beta_scaling_distance`; otherwise
    from the vectorised kernel, which is itself checked against the
    bisection oracle.
    """
    direction = cs.direction if direction is None else Direction.parse(direction)
    xs, ys = grid_points(cs, resolution)
    X, Y = np.meshgrid(xs, ys)
    q = np.c_[X.ravel(), Y.ravel()]
    inside = np.asarray(cs.contains(q, strict=True))
    lifted = cs.lift(q[inside])
    frame = cs.frame
    best = np.full(len(lifted), np.inf)
    second = np.full(len(lifted), np.inf)
    arg = np.full(len(lifted), -1)
    dist = beta_scaling_distance if exact else funk_distance
    for ws in weighted_sites:
        d = dist(frame, cs.lift(ws.position), lifted, direction) + ws.weight
        better = d < best
        second = np.where(better, best, np.minimum(second, d))
        arg = np.where(better, ws.origin_index, arg)
        best = np.where(better, d, best)
    labels = np.full(len(q), -1)
    gap = np.full(len(q), np.inf)
    labels[inside] = arg
    gap[inside] = second - best
    shape = (len(ys), len(xs))
    return GridLabels(xs, ys, labels.reshape(shape), gap.reshape(shape))


@dataclass(frozen=True, eq=False)
class SweepResult:
    count: int
    brackets: list       # (t_lo, t_hi) around each sign change
    t: np.ndarray
    values: np.ndarray


def circumcenter_sweep(setup, samples: int = 2048, density: int = 4) -> SweepResult:
    """Recount the circumcenters on an offset, denser grid.

    Uses plain 3-D Funk distances from the original sites to the lifted
    pencil centres, so none of the slice weights are involved.
    """
    m = density * samples
    eps = 1e-6
    step = (1 - 2 * eps) / m
    t = eps + (np.arange(m) + 0.5) * step
    x = setup.center(t)
    cone = setup.cone
    pts = cone.denormalize(setup.cross_section.lift(x))
    p, q, r = setup.sites
    if any(np.linalg.norm(cone.normalize(r)[:2] - zb.center) < zb.radius for zb in (setup.zp, setup.zq)):
        return SweepResult(0, [], t, np.full(m, np.nan))
    dist = lambda s: funk_distance(cone, np.broadcast_to(s, pts.shape), pts, setup.direction)
    vals = dist(r) - dist(p)
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    return SweepResult(len(idx), [(t[k], t[k + 1]) for k in idx], t, vals)
