"""
LangGraph workflow stages for the terrain analysis engine.

This package contains the stage implementations used by the workflow:
- Labeling: 8-connected walkable components and their contours
- Zoning: height/buildability zones, resource clusters, classification
- Separation model: candidate separations of a zone as an EFOP model
- Solver: local search over the model plus an exhaustive oracle
- Region builder: regions, choke points, region grid and adjacency
"""

from nodes.labeling import label_components, label_mask
from nodes.region_builder import build_regions, region_adjacency
from nodes.separation_model import build_model, enrich_contour, filter_candidate, generate_candidates
from nodes.solver import brute_force_solve, default_constraints, solve
from nodes.zoning import classify_zone, cluster_resources, contour_unbuildable_zones, split_into_zones

__all__ = [
    "label_components",
    "label_mask",
    "split_into_zones",
    "contour_unbuildable_zones",
    "cluster_resources",
    "classify_zone",
    "enrich_contour",
    "filter_candidate",
    "generate_candidates",
    "build_model",
    "solve",
    "brute_force_solve",
    "default_constraints",
    "build_regions",
    "region_adjacency",
]
