"""Forward and reverse Funk Voronoi diagrams in convex cones."""

from .core_metric import (
    FORWARD,
    REVERSE,
    Cone,
    Direction,
    ball_apex,
    ball_contains,
    contains,
    dominates,
    funk_distance,
    margin,
    partial_order,
    prune_dominated,
)
from .cross_section import (
    CrossSection,
    WeightedSite,
    ZeroBall,
    choose_cross_section,
    lift_to_ray,
    project_site,
    representative,
    weighted_distance,
    zero_ball,
)
from .cone2d import PlanarCone, bisector_ray_2d, voronoi_2d
from .apollonius import WeightedPoint, build_apollonius, tritangent_circles
from .elliptical import build_funk_voronoi, filter_vertex, relocate_vertex, setup
from .polygonal import (
    PolygonDomain,
    active_edge,
    build_polygonal_voronoi,
    polygon_distance,
    spokes,
    weighted_bisector,
)
from .circumcenter import RegionLabel, circumcenter_setup, classify, pencil
from .oracle import beta_scaling_distance, circumcenter_sweep, grid_labeling
from .serialization import build_diagram, diagram_to_dict, dumps, load_scene, parse_scene, render_svg
from .errors import FunkError, GeneralPositionViolation, NotInterior

__version__ = "0.1.0"
