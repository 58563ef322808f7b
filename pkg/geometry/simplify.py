"""
Ramer-Douglas-Peucker simplification of closed contour rings.

The closed-ring recursion is anchored at the two mutually farthest vertices;
both chains between them are simplified as open polylines. A simplification
that breaks the ring (self-intersection, fewer than three vertices, no
area) or that pushes a required point out of the polygon is re-run with half
the epsilon.
"""

import logging
from fractions import Fraction
from typing import List, Sequence

from error_handler import ErrorType, TerrainError
from geometry.primitives import (
    Location,
    Point,
    Polygon,
    Ring,
    point_in_polygon,
    ring_signed_area2,
    rings_properly_intersect,
    squared_distance_to_segment,
)

logger = logging.getLogger(__name__)

# Halving stops below this epsilon and the input is returned unchanged
MIN_EPSILON = 1.0 / 64


def _farthest_pair(ring: Sequence[Point]) -> tuple:
    best = (-1, 0, 1)
    n = len(ring)
    for i in range(n):
        pi = ring[i]
        for j in range(i + 1, n):
            pj = ring[j]
            d2 = (pi.x - pj.x) ** 2 + (pi.y - pj.y) ** 2
            if d2 > best[0]:
                best = (d2, i, j)
    return best[1], best[2]


def rdp_open(points: Sequence[Point], epsilon2: Fraction) -> List[Point]:
    """
    Simplify an open polyline, keeping both endpoints.

    Args:
        points: Polyline vertices
        epsilon2: Squared distance tolerance

    Returns:
        Kept vertices in order
    """
    if len(points) < 3:
        return list(points)

    keep = [False] * len(points)
    keep[0] = keep[-1] = True
    stack = [(0, len(points) - 1)]
    while stack:
        first, last = stack.pop()
        best_index, best_d2 = -1, -1
        for k in range(first + 1, last):
            d2 = squared_distance_to_segment(points[k], points[first], points[last])
            if d2 > best_d2:
                best_index, best_d2 = k, d2
        if best_index >= 0 and best_d2 > epsilon2:
            keep[best_index] = True
            stack.append((first, best_index))
            stack.append((best_index, last))

    return [p for p, kept in zip(points, keep) if kept]


def _simplify_once(ring: Ring, epsilon: float) -> Ring:
    i, j = _farthest_pair(ring)
    epsilon2 = Fraction(epsilon) ** 2
    first_chain = list(ring[i:j + 1])
    second_chain = list(ring[j:]) + list(ring[:i + 1])
    kept = rdp_open(first_chain, epsilon2)[:-1] + rdp_open(second_chain, epsilon2)[:-1]
    # restore the original starting vertex order
    start = ring[0]
    if start in kept:
        pivot = kept.index(start)
        kept = kept[pivot:] + kept[:pivot]
    return tuple(kept)


def _ring_is_valid(ring: Ring) -> bool:
    return len(ring) >= 3 and ring_signed_area2(ring) != 0


def simplify(ring: Ring, epsilon: float) -> Ring:
    """
    Simplify a closed ring with Ramer-Douglas-Peucker.

    Args:
        ring: Closed ring with at least three vertices
        epsilon: Distance tolerance in tile units (0 keeps the ring as is)

    Returns:
        Simplified ring whose vertices are a subset of the input's

    Raises:
        TerrainError: If the ring is degenerate
    """
    if len(ring) < 3 or ring_signed_area2(ring) == 0:
        raise TerrainError(
            ErrorType.DEGENERATE_RING,
            f"Cannot simplify a ring with {len(ring)} vertices",
            details={"vertices": len(ring)}
        )
    if epsilon <= 0:
        return tuple(ring)

    current = float(epsilon)
    while current >= MIN_EPSILON:
        candidate = _simplify_once(tuple(ring), current)
        if _ring_is_valid(candidate) and not rings_properly_intersect([candidate]):
            return candidate
        logger.debug(f"Simplification at epsilon={current} broke the ring, halving")
        current /= 2
    return tuple(ring)


def simplify_polygon(
    polygon: Polygon,
    epsilon: float,
    must_contain: Sequence[Point] = ()
) -> Polygon:
    """
    Simplify every ring of a polygon with one shared epsilon.

    The result is rejected and recomputed with epsilon/2 when rings cross each
    other or when a point of must_contain is no longer strictly inside.

    Args:
        polygon: Traced polygon
        epsilon: Distance tolerance in tile units
        must_contain: Points that must stay strictly inside (resource tile centres)

    Returns:
        Simplified polygon
    """
    if epsilon <= 0:
        return polygon

    current = float(epsilon)
    while current >= MIN_EPSILON:
        rings = [simplify(ring, current) for ring in polygon.rings]
        candidate = Polygon(outer=rings[0], holes=tuple(rings[1:]))
        if (len(rings) == 1 or not rings_properly_intersect(rings)) and all(
            point_in_polygon(p, candidate) is Location.INSIDE for p in must_contain
        ):
            return candidate
        logger.debug(f"Polygon simplification at epsilon={current} rejected, halving")
        current /= 2
    return polygon
