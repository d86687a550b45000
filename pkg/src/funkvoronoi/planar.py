"""Small planar-geometry helpers shared by the diagram builders."""

from __future__ import annotations

import numpy as np


def signed_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _seg_dist(p, a, b):
    ab = b - a
    den = np.sum(ab * ab, axis=-1)
    t = np.where(den > 0, np.sum((p - a) * ab, axis=-1) / np.where(den > 0, den, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[..., None] * ab), axis=-1)


def flatten_curve(f, s0: float, s1: float, tol: float, n0: int = 33,
                  max_points: int = 50000) -> tuple[np.ndarray, np.ndarray]:
    """Adaptively sample the parametric curve ``f(s)`` on ``[s0, s1]``.

    ``f`` maps an array of parameters to ``(N, 2)`` points.  Intervals are
    split until the curve midpoint is within ``tol`` of the chord.  Returns
    ``(params, points)``; ``s0 > s1`` is allowed and preserves orientation.
    """
    s = np.linspace(s0, s1, n0)
    p = f(s)
    for _ in range(40):
        mid = 0.5 * (s[:-1] + s[1:])
        pm = f(mid)
        bad = _seg_dist(pm, p[:-1], p[1:]) > tol
        if not bad.any() or len(s) + bad.sum() > max_points:
            break
        idx = np.nonzero(bad)[0]
        s = np.insert(s, idx + 1, mid[idx])
        p = np.insert(p, idx + 1, pm[idx], axis=0)
    return s, p


def rasterize(polygons, xs, ys) -> np.ndarray:
    """Scanline fill of labelled polygons onto the pixel centres ``xs x ys``.

    ``polygons`` is an iterable of ``(label, vertices)``; labels must be
    non-negative.  Returns an ``(len(ys), len(xs))`` int array holding the
    label, ``-1`` where no polygon covers the pixel and ``-2`` where more than
    one does.  Even-odd rule.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.full((len(ys), len(xs)), -1, dtype=np.int64)
    for label, poly in polygons:
        inside = _fill(np.asarray(poly, dtype=float), xs, ys)
        out = np.where(inside & (out == -1), label, np.where(inside, -2, out))
    return out


def _fill(poly, xs, ys):
    nx, ny = len(xs), len(ys)
    a = poly
    b = np.roll(poly, -1, axis=0)
    lo = np.minimum(a[:, 1], b[:, 1])
    hi = np.maximum(a[:, 1], b[:, 1])
    # rows whose centre y lies in [lo, hi)
    r0 = np.searchsorted(ys, lo, side="left")
    r1 = np.searchsorted(ys, hi, side="left")
    cnt = np.maximum(r1 - r0, 0)
    keep = cnt > 0
    if not keep.any():
        return np.zeros((ny, nx), dtype=bool)
    a, b, r0, cnt = a[keep], b[keep], r0[keep], cnt[keep]
    edge = np.repeat(np.arange(len(a)), cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    rows = r0[edge] + offs
    y = ys[rows]
    ea, eb = a[edge], b[edge]
    t = (y - ea[:, 1]) / (eb[:, 1] - ea[:, 1])
    x = ea[:, 0] + t * (eb[:, 0] - ea[:, 0])
    col = np.searchsorted(xs, x, side="left")  # first pixel centre >= x
    diff = np.zeros((ny, nx + 1), dtype=np.int64)
    np.add.at(diff, (rows, col), 1)
    return (np.cumsum(diff, axis=1)[:, :nx] % 2) == 1


def polyline_length(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(np.linalg.norm(np.diff(p, axis=0), axis=1))) if len(p) > 1 else 0.0


def points_in_polygon(q, poly) -> np.ndarray:
    """Even-odd point-in-polygon test for ``(N, 2)`` queries."""
    q = np.atleast_2d(np.asarray(q, dtype=float))
    a = np.asarray(poly, dtype=float)
    b = np.roll(a, -1, axis=0)
    inside = np.zeros(len(q), dtype=bool)
    for (x0, y0), (x1, y1) in zip(a, b):
        crosses = (y0 > q[:, 1]) != (y1 > q[:, 1])
        if not crosses.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x0 + (q[:, 1] - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (q[:, 0] < xi)
    return inside
