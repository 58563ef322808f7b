"""
Zoning Node for the terrain analysis engine.

This module splits each walkable component into zones of uniform height and
buildability, simplifies zone contours, finds resource clusters per zone and
classifies zones into those that need splitting and the exceptions.

Requirements addressed:
- Zones partition their component and carry simplified contours
- Unbuildable zones are exported as natural choke areas
- Resource clustering is single-linkage and independent of input order
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from geometry.primitives import Location, Point, Polygon, make_point, point_in_polygon, tile_center
from geometry.simplify import simplify_polygon
from models.models import (
    Component,
    LabeledGrid,
    Resource,
    ResourceCluster,
    TileGrid,
    Zone,
    ZoneClassification,
)
from nodes.labeling import label_mask

logger = logging.getLogger(__name__)

NEIGHBOR_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))


def split_into_zones(
    component: Component,
    grid: TileGrid,
    labeled: LabeledGrid,
    first_zone_id: int = 1,
    epsilon: float = 0.0,
    resource_tiles: Iterable[Tuple[int, int]] = ()
) -> List[Zone]:
    """
    Split a component into zones of uniform (height, buildability).

    Zone contours are traced with the same labeling routine restricted to the
    component and each signature, then simplified; a simplification may not
    push a resource tile centre of the zone out of its polygon.

    Args:
        component: Labeled walkable component
        grid: Map grid
        labeled: Labels of the walkable components
        first_zone_id: Id of the first zone returned
        epsilon: Simplification tolerance (0 keeps traced contours)
        resource_tiles: Resource tiles of the map

    Returns:
        Zones in raster order of their first tile, numbered from first_zone_id
    """
    x0, y0, x1, y1 = component.tile_bbox
    window = (slice(y0, y1 + 1), slice(x0, x1 + 1))
    inside = labeled.labels[window] == component.id
    levels = grid.terrain_height[window]
    buildable = grid.buildable[window]
    resources = set(resource_tiles)

    found = []
    signatures = sorted({(int(h), bool(b)) for h, b in zip(levels[inside], buildable[inside])})
    for level, is_buildable in signatures:
        mask = inside & (levels == level) & (buildable == is_buildable)
        zone_labels, zone_components = label_mask(mask, origin=(x0, y0))
        for zc in zone_components:
            ys, xs = np.nonzero(zone_labels.labels == zc.id)
            tiles = frozenset((int(x) + x0, int(y) + y0) for x, y in zip(xs, ys))
            first = min((y, x) for x, y in tiles)
            found.append((first, level, is_buildable, tiles, zc.polygon))

    found.sort(key=lambda item: item[0])
    zones = []
    for offset, (_, level, is_buildable, tiles, traced) in enumerate(found):
        must_contain = [tile_center(x, y) for x, y in sorted(resources & tiles)]
        contour = simplify_polygon(traced, epsilon, must_contain=must_contain)
        zones.append(Zone(
            id=first_zone_id + offset,
            parent_component=component.id,
            height_level=level,
            buildable=is_buildable,
            tiles=tiles,
            traced=traced,
            contour=contour,
        ))
    logger.debug(f"Component {component.id}: {len(zones)} zones over {len(signatures)} signatures")
    return zones


def contour_unbuildable_zones(zones: Sequence[Zone]) -> List[Tuple[int, Polygon]]:
    """
    Contours of the unbuildable zones; these are the natural choke areas.

    Args:
        zones: Zones from split_into_zones

    Returns:
        (zone id, simplified polygon) for every unbuildable zone
    """
    return [(zone.id, zone.contour) for zone in zones if not zone.buildable]


def _centroid(members: Sequence[Resource]) -> Point:
    n = len(members)
    sx = sum(Fraction(2 * m.x + 1, 2) for m in members)
    sy = sum(Fraction(2 * m.y + 1, 2) for m in members)
    return make_point(sx / n, sy / n)


def _anchor(centroid: Point, members: Sequence[Resource], polygon: Polygon) -> Point:
    if point_in_polygon(centroid, polygon) is Location.INSIDE:
        return centroid
    best, best_d2 = None, None
    for m in members:
        c = tile_center(m.x, m.y)
        d2 = (c.x - centroid.x) ** 2 + (c.y - centroid.y) ** 2
        if best is None or d2 < best_d2:
            best, best_d2 = c, d2
    return best


def cluster_resources(
    zone: Zone,
    resources: Sequence[Resource],
    threshold: float = 12.0,
    first_cluster_id: int = 1
) -> List[ResourceCluster]:
    """
    Group the zone's resources with single-linkage clustering.

    Two resources share a cluster iff a chain of members joins them with
    every link at most threshold tiles long.

    Args:
        zone: Buildable zone
        resources: Map resources (those outside the zone are ignored)
        threshold: Linkage distance in tiles
        first_cluster_id: Id of the first cluster returned

    Returns:
        Clusters ordered by their first member in raster order
    """
    members = sorted((r for r in resources if r.position in zone.tiles), key=lambda r: (r.y, r.x))
    if not members:
        return []

    if len(members) == 1:
        labels = np.zeros(1, dtype=int)
    else:
        coords = np.array([[r.x, r.y] for r in members], dtype=float)
        linked = squareform(pdist(coords, "sqeuclidean")) <= threshold * threshold
        _, labels = connected_components(csr_matrix(linked), directed=False)

    groups: Dict[int, List[Resource]] = {}
    for resource, label in zip(members, labels):
        groups.setdefault(int(label), []).append(resource)

    clusters = []
    for offset, group in enumerate(sorted(groups.values(), key=lambda g: (g[0].y, g[0].x))):
        centroid = _centroid(group)
        clusters.append(ResourceCluster(
            id=first_cluster_id + offset,
            zone_id=zone.id,
            members=tuple(group),
            centroid=centroid,
            anchor=_anchor(centroid, group, zone.contour),
        ))
    logger.debug(f"Zone {zone.id}: {len(members)} resources in {len(clusters)} clusters")
    return clusters


def zone_adjacency(zones: Sequence[Zone], zone_grid: np.ndarray) -> Dict[int, Tuple[int, ...]]:
    """
    Neighbouring zones of each zone (8-adjacency between their tiles).

    Args:
        zones: Zones
        zone_grid: [y, x] zone ids, 0 outside every zone

    Returns:
        zone id -> sorted neighbour ids
    """
    pairs = set()
    height, width = zone_grid.shape
    for dx, dy in NEIGHBOR_OFFSETS:
        ys = slice(max(0, -dy), height - max(0, dy))
        ys_shift = slice(max(0, dy), height - max(0, -dy))
        xs = slice(0, width - dx)
        xs_shift = slice(dx, width)
        a = zone_grid[ys, xs]
        b = zone_grid[ys_shift, xs_shift]
        touching = (a != b) & (a > 0) & (b > 0)
        for u, v in zip(a[touching].tolist(), b[touching].tolist()):
            pairs.add((u, v))
            pairs.add((v, u))

    neighbors: Dict[int, List[int]] = {zone.id: [] for zone in zones}
    for u, v in pairs:
        if u in neighbors:
            neighbors[u].append(v)
    return {zone_id: tuple(sorted(ids)) for zone_id, ids in neighbors.items()}


def classify_zone(zone: Zone, neighbors: Sequence[Zone]) -> ZoneClassification:
    """
    Classify a zone once its clusters are known.

    Args:
        zone: Zone with clusters
        neighbors: Zones adjacent to it

    Returns:
        ZoneClassification
    """
    n = len(zone.clusters)
    if n >= 2:
        return ZoneClassification.NEEDS_SPLIT
    if n == 1:
        return ZoneClassification.SINGLE_CLUSTER
    if not neighbors:
        return ZoneClassification.EXCEPTION_ISLAND
    if zone.buildable and all(not other.buildable for other in neighbors):
        return ZoneClassification.EXCEPTION_UNBUILDABLE_SURROUND
    return ZoneClassification.EXCEPTION_NO_CLUSTER
