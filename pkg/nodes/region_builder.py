"""
Region Builder Node for the terrain analysis engine.

This module assembles the final regions from classified zones and solved
separations, derives choke points, rasterizes the per-tile region grid and
computes region adjacency.

Requirements addressed:
- A split zone yields one region per face of its selected separations
- Unsplit zones become single regions of the kind given by their classification
- Solved separations and unbuildable zones are exported as choke points
- Region adjacency is symmetric and covers chokes and shared boundaries
"""

import itertools
import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from geometry.primitives import Segment, polygon_area, polygons_share_boundary
from geometry.raster import rasterize_polygon
from logging_config import create_context_logger
from models.models import (
    ChokeKind,
    ChokePoint,
    EfopModel,
    Region,
    RegionKind,
    Solution,
    Zone,
    ZoneClassification,
)
from nodes.solver import Assignment

logger = logging.getLogger(__name__)

_KIND_BY_CLASSIFICATION = {
    ZoneClassification.SINGLE_CLUSTER: RegionKind.STANDARD,
    ZoneClassification.EXCEPTION_ISLAND: RegionKind.ISLAND,
    ZoneClassification.EXCEPTION_UNBUILDABLE_SURROUND: RegionKind.NO_CLUSTER_EXCEPTION,
    ZoneClassification.EXCEPTION_NO_CLUSTER: RegionKind.NO_CLUSTER_EXCEPTION,
    ZoneClassification.NEEDS_SPLIT: RegionKind.UNRESOLVED,
}

# (zone id, chord segment, region on side 0, region on side 1)
SeparationChoke = Tuple[int, Segment, int, int]


def unsplit_region(zone: Zone, region_id: int) -> Region:
    """Single region covering a whole zone."""
    if not zone.buildable:
        kind = RegionKind.UNBUILDABLE_CHOKE_AREA
    else:
        kind = _KIND_BY_CLASSIFICATION[zone.classification]
    cluster_id = zone.clusters[0].id if kind is RegionKind.STANDARD else None
    return Region(
        id=region_id,
        polygon=zone.contour,
        area=polygon_area(zone.contour),
        cluster_id=cluster_id,
        kind=kind,
        parent_zone=zone.id,
    )


def split_zone_regions(
    zone: Zone,
    model: EfopModel,
    solution: Solution,
    first_region_id: int
) -> Tuple[List[Region], List[SeparationChoke]]:
    """
    Regions of a zone cut by the separations of a feasible solution.

    Args:
        zone: Zone that needed splitting
        model: The zone's model
        solution: Feasible solution of the model
        first_region_id: Id of the first region

    Returns:
        (regions in face order, separation chokes in selected-id order)
    """
    assignment = Assignment(model, solution.selected)
    face_set = assignment.face_set
    polygons = model.arrangement.face_polygons(face_set)

    cluster_of_face: Dict[int, int] = {}
    for cluster, face in zip(zone.clusters, assignment.cluster_faces):
        cluster_of_face.setdefault(face, cluster.id)

    regions = [
        Region(
            id=first_region_id + f,
            polygon=polygon,
            area=face_set.faces[f].area,
            cluster_id=cluster_of_face.get(f),
            kind=RegionKind.STANDARD,
            parent_zone=zone.id,
        )
        for f, polygon in enumerate(polygons)
    ]
    chokes = [
        (zone.id, model.arrangement.chord_segment(chord), first_region_id + left, first_region_id + right)
        for chord, (left, right) in zip(face_set.chords, face_set.chord_faces)
    ]
    return regions, chokes


def paint_zone(region_grid: np.ndarray, zone_mask: np.ndarray, regions: Sequence[Region]) -> None:
    """
    Write the region ids of one zone into the region grid.

    A tile goes to the first region whose polygon contains its centre; zone
    tiles claimed by no region go to the zone's first region.
    """
    height, width = region_grid.shape
    unclaimed = zone_mask.copy()
    if len(regions) > 1:
        for region in regions:
            claim = unclaimed & rasterize_polygon(region.polygon, width, height)
            region_grid[claim] = region.id
            unclaimed &= ~claim
    region_grid[unclaimed] = regions[0].id


def _touching_pairs(region_grid: np.ndarray) -> Set[Tuple[int, int]]:
    pairs: Set[Tuple[int, int]] = set()
    for a, b in (
        (region_grid[:, :-1], region_grid[:, 1:]),
        (region_grid[:-1, :], region_grid[1:, :]),
    ):
        touching = (a != b) & (a > 0) & (b > 0)
        for u, v in zip(a[touching].tolist(), b[touching].tolist()):
            pairs.add((min(u, v), max(u, v)))
    return pairs


def _shared_boundary_pairs(regions: Sequence[Region], region_grid: np.ndarray) -> Set[Tuple[int, int]]:
    """
    Pairs of regions whose boundaries share a piece of positive length.

    Regions of different zones meet along tile edges, so 4-adjacent tiles
    decide. Faces of one split zone can have 4-adjacent tiles while their
    polygons only meet at a chord endpoint, so their polygons decide.
    """
    zone_of = {region.id: region.parent_zone for region in regions}
    pairs = {
        (u, v) for u, v in _touching_pairs(region_grid)
        if u not in zone_of or v not in zone_of or zone_of[u] != zone_of[v]
    }
    by_zone: Dict[int, List[Region]] = defaultdict(list)
    for region in regions:
        by_zone[region.parent_zone].append(region)
    for members in by_zone.values():
        for first, second in itertools.combinations(members, 2):
            if polygons_share_boundary(first.polygon, second.polygon):
                pairs.add((min(first.id, second.id), max(first.id, second.id)))
    return pairs


def unbuildable_chokes(
    regions: Sequence[Region],
    region_grid: np.ndarray,
    first_choke_id: int
) -> List[ChokePoint]:
    """
    One polygon choke per (unbuildable region, neighbouring region) pair.

    Args:
        regions: All regions
        region_grid: Per-tile region ids
        first_choke_id: Id of the first choke

    Returns:
        New chokes ordered by unbuildable region id, then neighbour id
    """
    by_id = {region.id: region for region in regions}
    neighbours: Dict[int, Set[int]] = {}
    for u, v in _shared_boundary_pairs(regions, region_grid):
        neighbours.setdefault(u, set()).add(v)
        neighbours.setdefault(v, set()).add(u)

    chokes = []
    for region in sorted(regions, key=lambda r: r.id):
        if region.kind is not RegionKind.UNBUILDABLE_CHOKE_AREA:
            continue
        for other in sorted(neighbours.get(region.id, ())):
            if other not in by_id:
                continue
            chokes.append(ChokePoint(
                id=first_choke_id + len(chokes),
                kind=ChokeKind.UNBUILDABLE_ZONE,
                geometry=region.polygon,
                joins=(min(region.id, other), max(region.id, other)),
                zone_id=region.parent_zone,
            ))
    return chokes


def build_regions(
    zones: Sequence[Zone],
    models: Dict[int, EfopModel],
    solutions: Dict[int, Solution],
    zone_grid: np.ndarray,
    first_region_id: int = 1,
    first_choke_id: int = 1
) -> Tuple[List[Region], List[ChokePoint], np.ndarray]:
    """
    Build regions, choke points and the region grid for a set of zones.

    Zones that needed splitting but have no feasible solution are exported
    whole, with kind unresolved.

    Args:
        zones: Classified zones
        models: Zone id -> model, for zones that needed splitting
        solutions: Zone id -> solution
        zone_grid: Per-tile zone ids
        first_region_id: Id of the first new region
        first_choke_id: Id of the first new choke point

    Returns:
        (new regions, new choke points, region grid)
    """
    region_grid = np.zeros(zone_grid.shape, dtype=np.int32)
    regions: List[Region] = []
    separations: List[SeparationChoke] = []
    next_id = first_region_id

    for zone in zones:
        zlog = create_context_logger(__name__, zone=zone.id, clusters=len(zone.clusters))
        solution = solutions.get(zone.id)
        if zone.classification is ZoneClassification.NEEDS_SPLIT and solution is not None and solution.feasible:
            zone_regions, zone_chokes = split_zone_regions(zone, models[zone.id], solution, next_id)
            separations.extend(zone_chokes)
        else:
            zone_regions = [unsplit_region(zone, next_id)]
            if zone_regions[0].kind is RegionKind.UNRESOLVED:
                zlog.warning("Exported unsplit")
        paint_zone(region_grid, zone_grid == zone.id, zone_regions)
        regions.extend(zone_regions)
        next_id += len(zone_regions)
        zlog.debug(f"{len(zone_regions)} regions ({zone_regions[0].kind.value})")

    chokes = [
        ChokePoint(
            id=first_choke_id + k,
            kind=ChokeKind.SEPARATION,
            geometry=segment,
            joins=(min(left, right), max(left, right)),
            zone_id=zone_id,
        )
        for k, (zone_id, segment, left, right) in enumerate(separations)
    ]
    chokes.extend(unbuildable_chokes(regions, region_grid, first_choke_id + len(chokes)))

    logger.info(f"Built {len(regions)} regions and {len(chokes)} choke points from {len(zones)} zones")
    return regions, chokes, region_grid


def region_adjacency(
    regions: Sequence[Region],
    choke_points: Sequence[ChokePoint],
    region_grid: np.ndarray
) -> List[Tuple[int, int]]:
    """
    Region graph edges: pairs joined by a choke or sharing a boundary.

    Regions of different zones share a boundary when two of their tiles are
    4-adjacent in the region grid; faces of one split zone when their polygons
    share a piece of boundary of positive length.

    Args:
        regions: All regions
        choke_points: All choke points
        region_grid: Per-tile region ids

    Returns:
        Sorted list of (smaller id, larger id) pairs
    """
    known = {region.id for region in regions}
    pairs = _shared_boundary_pairs(regions, region_grid)
    for choke in choke_points:
        u, v = choke.joins
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return sorted((u, v) for u, v in pairs if u in known and v in known)

