"""
Shared fixtures for the test suites.
"""

from dataclasses import replace
from pathlib import Path
from typing import Optional

from config import AppConfig
from data_sources import load_map, load_map_file
from geometry.primitives import Point, Polygon
from models.models import MapData, Zone
from nodes.labeling import label_components
from nodes.zoning import cluster_resources, split_into_zones

MAPS_DIR = Path(__file__).resolve().parent.parent / "maps"

# Deterministic iteration budget of the suites, far below the 20,000 default
TEST_ITERATIONS_PER_100MS = 500


def ascii_map(text: str, name: str = "fixture") -> MapData:
    """Load a map from ASCII art (leading/trailing blank lines are ignored)."""
    lines = [line.strip() for line in text.strip().splitlines()]
    return load_map("\n".join(lines) + "\n", "ascii", name=name)


def corpus_map(name: str) -> MapData:
    matches = sorted(MAPS_DIR.glob(f"{name}.*"))
    return load_map_file(matches[0])


def deterministic_config(
    seed: int = 0,
    cluster_threshold: Optional[float] = None,
    max_edge: Optional[float] = None,
    **solver_overrides
) -> AppConfig:
    """Deterministic configuration at the suite budget; solver fields can be overridden."""
    config = AppConfig()
    solver_fields = {"iterations_per_100ms": TEST_ITERATIONS_PER_100MS, **solver_overrides}
    solver = replace(config.solver, seed=seed, deterministic=True, **solver_fields)
    config = replace(config, solver=solver)
    if cluster_threshold is not None:
        config = replace(config, zoning=replace(config.zoning, cluster_threshold=cluster_threshold))
    if max_edge is not None:
        config = replace(config, geometry=replace(config.geometry, max_edge=max_edge))
    return config


def rect(x0, y0, x1, y1) -> Polygon:
    """Axis-aligned rectangle with the interior on the left of its ring."""
    return Polygon(outer=(Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)))


THREE_CLUSTER_CORRIDOR = """
    ##################
    #m..............m#
    #.......m........#
    #................#
    ##################
"""


def clustered_zone(map_data: MapData, threshold: float, epsilon: float = 1.0) -> Zone:
    """First zone of a single-component map, with its resource clusters."""
    labeled, components = label_components(map_data.grid)
    zone = split_into_zones(
        components[0], map_data.grid, labeled,
        first_zone_id=1,
        epsilon=epsilon,
        resource_tiles=map_data.resource_tiles(),
    )[0]
    zone.clusters = cluster_resources(zone, map_data.resources, threshold)
    return zone
