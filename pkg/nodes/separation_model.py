"""
Separation Model Node for the terrain analysis engine.

This module turns a zone that holds several resource clusters into the
combinatorial problem solved by nodes.solver: the zone contour is enriched so
that long edges offer intermediate endpoints, every pair of contour vertices
becomes a candidate separation, ill-formed candidates are filtered out and the
survivors are packaged with the constraints and the objective.

Requirements addressed:
- Candidates are all vertex pairs of the enriched contour, filtered
- Candidates crossing resources, unwalkable, unbuildable or foreign tiles are rejected
- Models are deterministic and their ids follow the sorted endpoint pairs
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from error_handler import ErrorType, TerrainError
from geometry.chords import ChordArrangement, ChordRef, chord_stays_inside
from geometry.primitives import Point, Polygon, Segment, make_point, tile_center
from geometry.raster import supercover_tiles
from geometry.spatial_index import SpatialIndex
from models.models import EfopModel, MapData, Objective, Separation, Tile, Zone

logger = logging.getLogger(__name__)

DEFAULT_MAX_EDGE = 10.0


# ============================================================================
# Contour enrichment
# ============================================================================

def _parts_needed(u: Point, w: Point, max_edge: Fraction) -> int:
    """Smallest k such that the edge split in k equal parts has parts <= max_edge."""
    length2 = (w.x - u.x) ** 2 + (w.y - u.y) ** 2
    k = max(1, math.ceil(math.sqrt(length2) / max_edge))
    while length2 > (k * max_edge) ** 2:
        k += 1
    while k > 1 and length2 <= ((k - 1) * max_edge) ** 2:
        k -= 1
    return k


def _enrich_ring(ring: Sequence[Point], max_edge: Fraction) -> Tuple[Point, ...]:
    out: List[Point] = []
    n = len(ring)
    for i in range(n):
        u, w = ring[i], ring[(i + 1) % n]
        out.append(u)
        k = _parts_needed(u, w, max_edge)
        for j in range(1, k):
            t = Fraction(j, k)
            out.append(make_point(u.x + (w.x - u.x) * t, u.y + (w.y - u.y) * t))
    return tuple(out)


def enrich_contour(contour: Polygon, max_edge: float = DEFAULT_MAX_EDGE) -> Polygon:
    """
    Subdivide every edge longer than max_edge into equal parts.

    Inserted points are exact, so the enriched polygon covers the same point
    set as the input.

    Args:
        contour: Simplified zone polygon
        max_edge: Longest edge kept as is, in tiles

    Returns:
        Polygon whose vertex set is a superset of the input's
    """
    limit = Fraction(str(max_edge))
    return Polygon(
        outer=_enrich_ring(contour.outer, limit),
        holes=tuple(_enrich_ring(hole, limit) for hole in contour.holes),
    )


# ============================================================================
# Candidate filtering
# ============================================================================

@dataclass
class FilterContext:
    """Per-zone data shared by every candidate test."""
    polygon: Polygon
    allowed_tiles: FrozenSet[Tile]
    edge_index: SpatialIndex
    edge_refs: List[Tuple[int, int]]

    @classmethod
    def build(cls, zone: Zone, polygon: Polygon, map_data: MapData) -> "FilterContext":
        """
        Precompute the tiles a chord may cross and an index of contour edges.

        Allowed tiles are the zone's tiles that are walkable, buildable and free
        of resources.
        """
        grid = map_data.grid
        resources = map_data.resource_tiles()
        allowed = frozenset(
            (x, y) for x, y in zone.tiles
            if grid.walkable[y, x] and grid.buildable[y, x] and (x, y) not in resources
        )
        refs: List[Tuple[int, int]] = []
        boxes = []
        for r, ring in enumerate(polygon.rings):
            n = len(ring)
            for i in range(n):
                refs.append((r, i))
                boxes.append(Segment(ring[i], ring[(i + 1) % n]).bbox)
        return cls(polygon=polygon, allowed_tiles=allowed, edge_index=SpatialIndex.from_boxes(boxes), edge_refs=refs)

    def touching_edges(self, segment: Segment) -> List[Tuple[int, int]]:
        return [self.edge_refs[pos] for pos in self.edge_index.query(segment.bbox)]


def _adjacent_on_ring(ref: ChordRef, polygon: Polygon) -> bool:
    if ref.ring_a != ref.ring_b:
        return False
    n = len(polygon.rings[ref.ring_a])
    gap = (ref.index_b - ref.index_a) % n
    return gap == 1 or gap == n - 1


def filter_candidate(
    separation: Separation,
    zone: Zone,
    map_data: MapData,
    context: Optional[FilterContext] = None,
    polygon: Optional[Polygon] = None
) -> bool:
    """
    Decide whether a tentative separation is kept.

    A separation is rejected when its endpoints are adjacent contour vertices,
    when a tile met by the open segment holds a resource, is unwalkable,
    unbuildable or outside the zone, when it touches the contour anywhere but
    at its endpoints, or when its midpoint is not strictly inside the zone.

    Args:
        separation: Candidate with cached covered tiles
        zone: Zone being split
        map_data: Map the zone belongs to
        context: Precomputed FilterContext (built on demand when omitted)
        polygon: Enriched zone polygon the candidate refers to (zone contour by default)

    Returns:
        True to keep the candidate
    """
    if context is None:
        context = FilterContext.build(zone, polygon or zone.contour, map_data)
    if separation.a == separation.b or _adjacent_on_ring(separation.ref, context.polygon):
        return False
    if any(tile not in context.allowed_tiles for tile in separation.covered_tiles):
        return False
    segment = separation.segment
    return chord_stays_inside(context.polygon, segment, context.touching_edges(segment))


# ============================================================================
# Candidate generation
# ============================================================================

def generate_candidates(zone: Zone, enriched: Polygon, map_data: MapData) -> List[Separation]:
    """
    Enumerate every vertex pair of the enriched contour and keep valid chords.

    Survivors are numbered 1..k in the order of their sorted endpoint pairs,
    which makes ids independent of ring orientation and start vertex.

    Args:
        zone: Zone classified as needing a split
        enriched: Enriched zone polygon
        map_data: Map of the zone

    Returns:
        Filtered separations with consecutive ids
    """
    context = FilterContext.build(zone, enriched, map_data)
    vertices = [(p, r, i) for r, ring in enumerate(enriched.rings) for i, p in enumerate(ring)]

    kept: Dict[Tuple[Point, Point], Separation] = {}
    examined = 0
    for s in range(len(vertices)):
        p, rp, ip = vertices[s]
        for t in range(s + 1, len(vertices)):
            q, rq, iq = vertices[t]
            if p == q:
                continue
            examined += 1
            a, b, ref = (p, q, ChordRef(rp, ip, rq, iq)) if p < q else (q, p, ChordRef(rq, iq, rp, ip))
            if (a, b) in kept:
                continue
            segment = Segment(a, b)
            tentative = Separation(
                id=0,
                a=a,
                b=b,
                ref=ref,
                length=segment.length,
                covered_tiles=tuple(supercover_tiles(segment)),
            )
            if filter_candidate(tentative, zone, map_data, context=context):
                kept[(a, b)] = tentative

    candidates = [
        Separation(id=k, a=s.a, b=s.b, ref=s.ref, length=s.length, covered_tiles=s.covered_tiles)
        for k, s in enumerate((kept[key] for key in sorted(kept)), start=1)
    ]
    logger.debug(f"Zone {zone.id}: {len(candidates)} of {examined} vertex pairs kept")
    return candidates


# ============================================================================
# Model assembly
# ============================================================================

def _cluster_sites(zone: Zone) -> Tuple[List[Point], List[int], List[List[int]]]:
    sites: List[Point] = [cluster.anchor for cluster in zone.clusters]
    anchor_sites = list(range(len(sites)))
    member_sites: List[List[int]] = []
    for cluster in zone.clusters:
        indices = []
        for member in cluster.members:
            indices.append(len(sites))
            sites.append(tile_center(member.x, member.y))
        member_sites.append(indices)
    return sites, anchor_sites, member_sites


def build_model(
    zone: Zone,
    objective: Objective,
    map_data: MapData,
    max_edge: float = DEFAULT_MAX_EDGE
) -> EfopModel:
    """
    Build the separation problem of a zone.

    Args:
        zone: Zone with at least two clusters
        objective: Objective to minimize
        map_data: Map of the zone
        max_edge: Enrichment edge length

    Returns:
        EfopModel with NoCrossings and MaxOneClusterPerRegion constraints

    Raises:
        TerrainError: MODEL_TOO_SMALL (recoverable) when fewer than n - 1 candidates survive
    """
    from nodes.solver import default_constraints

    n_clusters = len(zone.clusters)
    enriched = enrich_contour(zone.contour, max_edge)
    candidates = generate_candidates(zone, enriched, map_data)
    if len(candidates) < n_clusters - 1:
        raise TerrainError(
            ErrorType.MODEL_TOO_SMALL,
            f"Zone {zone.id} has {len(candidates)} valid separations, {n_clusters - 1} needed",
            details={"zone": zone.id, "candidates": len(candidates), "clusters": n_clusters},
            recoverable=True,
        )

    sites, anchor_sites, member_sites = _cluster_sites(zone)
    model = EfopModel(
        zone_id=zone.id,
        candidates=candidates,
        n_clusters=n_clusters,
        objective=objective,
        arrangement=ChordArrangement(enriched, sites),
        cluster_sites=anchor_sites,
        member_sites=member_sites,
        constraints=default_constraints(),
        candidate_index=SpatialIndex.from_boxes(c.bbox for c in candidates),
    )
    logger.info(
        f"Zone {zone.id}: model with {model.variable_count} variables, "
        f"{model.required_selected} separations to select ({objective.value})"
    )
    return model
