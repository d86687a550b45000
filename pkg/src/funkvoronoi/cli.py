"""Command-line interface: ``funkvoronoi {distance,voronoi,circumcenter,verify}``.

Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 degenerate input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .cone2d import Diagram2D
from .core_metric import FORWARD, REVERSE, funk_distance
from .circumcenter import circumcenter_setup, classify
from .elliptical import FunkVoronoiDiagram3D
from .errors import (
    DegenerateOrder,
    DegenerateTriple,
    FunkError,
    GeneralPositionViolation,
    TraceStall,
)
from .oracle import grid_labeling
from .planar import rasterize
from .serialization import (
    Scene,
    build_diagram,
    diagram_to_dict,
    dumps,
    parse_scene,
    render_svg,
    vertex_residual,
)

AGREEMENT_MIN = 0.999
RESIDUAL_MAX = 1e-7
GAP_BAND = 1e-6

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


def _scene(args) -> Scene:
    try:
        data = json.loads(Path(args.scene).read_text())
    except json.JSONDecodeError as exc:
        raise FunkError(f"malformed JSON: {exc}") from None
    if getattr(args, "metric", None):
        data = dict(data, metric=args.metric)
    return parse_scene(data)


def cmd_distance(args) -> int:
    scene = _scene(args)
    n = len(scene.sites)
    if not (0 <= args.i < n and 0 <= args.j < n):
        raise FunkError("site index out of range")
    a, b = scene.sites[args.i], scene.sites[args.j]
    cone = scene.metric_cone
    print(f"F={funk_distance(cone, a, b, FORWARD):.12g}")
    print(f"F_r={funk_distance(cone, a, b, REVERSE):.12g}")
    return EXIT_OK


def cmd_voronoi(args) -> int:
    scene = _scene(args)
    diagram = build_diagram(scene, args.seed)
    text = dumps(diagram_to_dict(scene, diagram))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        Path(args.svg).write_text(render_svg(scene, diagram, show_spokes=args.spokes))
    return EXIT_OK


def cmd_circumcenter(args) -> int:
    scene = _scene(args)
    if scene.planar or len(scene.sites) != 3:
        raise FunkError("circumcenter needs exactly three sites in a 3-D cone")
    z = scene.cone.normalize(scene.sites)[:, 2]
    k = int(np.argmax(z) if scene.metric is FORWARD else np.argmin(z))
    p, q = [scene.sites[i] for i in range(3) if i != k]
    result = classify(circumcenter_setup(scene.cone, p, q, scene.sites[k], scene.metric))
    print(f"label={result.label.value}")
    print(f"count={len(result.circumcenters)}")
    for c in result.circumcenters:
        rep = ", ".join(f"{x:.12g}" for x in c.representative)
        ray = ", ".join(f"{x:.12g}" for x in c.ray)
        print(f"center=({rep}) ray=({ray}) radius={c.radius:.12g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification


def _verify_planar(scene: Scene, diagram: Diagram2D, resolution: int, stored: dict | None):
    if stored is not None:
        rays = np.array([r["direction"] for r in stored.get("rays", [])], dtype=float).reshape(-1, 2)
        diagram = Diagram2D(diagram.direction, diagram.sites, list(stored.get("order", diagram.order)),
                            rays, diagram.dominated, diagram.cone_rays, diagram.ccw)
    r1, r2 = diagram.cone_rays
    a1 = np.arctan2(r1[1], r1[0])
    span = np.arctan2(r1[0] * r2[1] - r1[1] * r2[0], r1 @ r2)
    ang = a1 + span * (np.arange(resolution) + 0.5) / resolution
    rad = np.linspace(0.5, 2.0, resolution) * float(np.linalg.norm(scene.sites, axis=1).max())
    A, R = np.meshgrid(ang, rad)
    x = np.c_[(R * np.cos(A)).ravel(), (R * np.sin(A)).ravel()]
    cone = scene.metric_cone
    d = np.array([funk_distance(cone, np.broadcast_to(s, x.shape), x, diagram.direction)
                  for s in scene.sites])
    srt = np.sort(d, axis=0)
    gap = srt[1] - srt[0] if len(d) > 1 else np.full(len(x), np.inf)
    truth = np.argmin(d, axis=0)
    got = diagram.locate(x)
    mask = gap > GAP_BAND
    agreement = float(np.mean(got[mask] == truth[mask])) if mask.any() else 1.0
    res = 0.0
    for k in range(len(diagram.rays)):
        a, b = diagram.order[k], diagram.order[k + 1]
        pts = np.outer(np.linspace(0.1, 10, 50), diagram.rays[k])
        fa = funk_distance(cone, np.broadcast_to(scene.sites[a], pts.shape), pts, diagram.direction)
        fb = funk_distance(cone, np.broadcast_to(scene.sites[b], pts.shape), pts, diagram.direction)
        res = max(res, float(np.max(np.abs(fa - fb))))
    return agreement, res


def verify(scene: Scene, resolution: int = 512, stored: dict | None = None, seed: int | None = None):
    """Compare a diagram (fresh, or ``stored`` JSON) with the grid oracle.

    Returns ``(agreement, max_residual, passed)``.
    """
    diagram = build_diagram(scene, seed)
    if isinstance(diagram, Diagram2D):
        agreement, res = _verify_planar(scene, diagram, resolution, stored)
    else:
        if stored is not None:
            cells = [(int(c["site"]), np.array(c["polygon"], dtype=float)) for c in stored["cells"]]
            verts = [(np.array(v["representative"], dtype=float), v["triple"]) for v in stored["vertices"]]
        else:
            cells = sorted(diagram.cells.items())
            verts = [(v.representative if isinstance(diagram, FunkVoronoiDiagram3D) else v.point, v.triple)
                     for v in diagram.vertices]
        grid = grid_labeling(diagram.cross_section, diagram.weighted, resolution=resolution)
        labels = rasterize(cells, grid.xs, grid.ys)
        mask = (grid.labels >= 0) & (grid.gap > GAP_BAND)
        agreement = float(np.mean(labels[mask] == grid.labels[mask])) if mask.any() else 1.0
        res = max([vertex_residual(diagram, p, t) for p, t in verts], default=0.0)
    passed = agreement >= AGREEMENT_MIN and res <= RESIDUAL_MAX
    return agreement, res, passed


def cmd_verify(args) -> int:
    scene = _scene(args)
    stored = None
    if args.diagram:
        try:
            stored = json.loads(Path(args.diagram).read_text())
        except json.JSONDecodeError as exc:
            raise FunkError(f"malformed diagram JSON: {exc}") from None
    try:
        agreement, res, passed = verify(scene, args.resolution, stored, args.seed)
    except (KeyError, TypeError, IndexError) as exc:
        raise FunkError(f"malformed diagram JSON: missing or invalid field {exc}") from None
    print(f"agreement={agreement:.6f}")
    print(f"max_residual={res:.3e}")
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="funkvoronoi", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scene", help="scene JSON file")
        p.add_argument("--metric", choices=["forward", "reverse"], help="override the scene metric")
        p.add_argument("--seed", type=int, default=None, help="insertion-order seed (polygonal cones)")

    p = sub.add_parser("distance", help="forward and reverse distance between two sites")
    common(p)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("voronoi", help="build the diagram and write JSON (and SVG)")
    common(p)
    p.add_argument("--out", help="diagram JSON path (default: stdout)")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--spokes", action="store_true", help="draw spokes (polygonal cones)")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("circumcenter", help="classify a three-site scene")
    common(p)
    p.set_defaults(func=cmd_circumcenter)

    p = sub.add_parser("verify", help="check a diagram against the grid oracle")
    common(p)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--diagram", help="verify this diagram JSON instead of a fresh build")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeneralPositionViolation as exc:
        idx = f" (sites {', '.join(map(str, exc.indices))})" if exc.indices else ""
        print(f"error: degenerate input: {exc}{idx}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DegenerateOrder, DegenerateTriple, TraceStall) as exc:
        print(f"error: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (FunkError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
