"""Inscribed polytope approximation of the Euclidean unit ball."""

from .approx import (
    build_qn,
    c_hat,
    classify_facets,
    del_bound,
    greedy_net,
    hausdorff_distance,
    hausdorff_gap,
    lemma7_search,
    symmetric_difference,
)
from .audit import theorem1_audit, upper_bound_audit
from .ballmath import ball_volume, cap_volume, sphere_surface, stirling_bounds
from .cone import spherical_measure, umbrella_gap
from .estimator import InscribedPolytopeApproximator
from .exceptions import BallgapError
from .geometry import SimplexFacet, cap_of, facet_hyperplane, facet_stats
from .hull import Polytope, convex_hull, polytope_volume, surface_area
from .montecarlo import MCEstimate

__version__ = "0.1.0"

__all__ = [
    "BallgapError",
    "InscribedPolytopeApproximator",
    "MCEstimate",
    "Polytope",
    "SimplexFacet",
    "ball_volume",
    "build_qn",
    "c_hat",
    "cap_of",
    "cap_volume",
    "classify_facets",
    "convex_hull",
    "del_bound",
    "facet_hyperplane",
    "facet_stats",
    "greedy_net",
    "hausdorff_distance",
    "hausdorff_gap",
    "lemma7_search",
    "polytope_volume",
    "sphere_surface",
    "spherical_measure",
    "stirling_bounds",
    "surface_area",
    "symmetric_difference",
    "theorem1_audit",
    "umbrella_gap",
    "upper_bound_audit",
]
