"""
Tile rasterization of segments and polygons.

Tile (x, y) is the closed unit square [x, x+1] x [y, y+1]. A segment's
supercover is the set of tiles whose closed square meets the segment at a
point other than its endpoints, so a chord that starts on a contour corner
does not pick up the tiles it only touches at that corner.
"""

import math
from fractions import Fraction
from typing import List, Optional, Set, Tuple

import numpy as np

from geometry.primitives import Point, Polygon, Segment, ring_edges

Tile = Tuple[int, int]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _closed_supercover(seg: Segment) -> Set[Tile]:
    a, b = seg.a, seg.b
    coords = (a.x, a.y, b.x, b.y)
    scale = 1
    for value in coords:
        scale = math.lcm(scale, getattr(value, "denominator", 1))
    x0, y0, x1, y1 = (int(value * scale) for value in coords)
    if x0 > x1:
        x0, y0, x1, y1 = x1, y1, x0, y0

    tiles: Set[Tile] = set()
    if x0 == x1:
        ylo, yhi = min(y0, y1), max(y0, y1)
        for i in range(_ceil_div(x0, scale) - 1, x0 // scale + 1):
            for j in range(_ceil_div(ylo, scale) - 1, yhi // scale + 1):
                tiles.add((i, j))
        return tiles

    dx, dy = x1 - x0, y1 - y0
    q = dx * scale
    for i in range(_ceil_div(x0, scale) - 1, x1 // scale + 1):
        xa = max(i * scale, x0)
        xb = min((i + 1) * scale, x1)
        if xa > xb:
            continue
        na = y0 * dx + (xa - x0) * dy
        nb = y0 * dx + (xb - x0) * dy
        lo, hi = min(na, nb), max(na, nb)
        for j in range(_ceil_div(lo, q) - 1, hi // q + 1):
            tiles.add((i, j))
    return tiles


def _meets_beyond_endpoint(tile: Tile, p: Point, direction: Tuple) -> bool:
    """Does the segment leaving p along direction enter the closed tile square?"""
    x, y = tile
    dx, dy = direction
    if not (x <= p.x <= x + 1 and y <= p.y <= y + 1):
        return False
    if p.x == x and dx < 0:
        return False
    if p.x == x + 1 and dx > 0:
        return False
    if p.y == y and dy < 0:
        return False
    if p.y == y + 1 and dy > 0:
        return False
    return True


def supercover_tiles(
    seg: Segment,
    width: Optional[int] = None,
    height: Optional[int] = None
) -> List[Tile]:
    """
    Tiles met by a segment, excluding tiles met only at an endpoint.

    Args:
        seg: Segment in tile-corner units
        width: Optional grid width; tiles outside the grid are dropped
        height: Optional grid height

    Returns:
        Sorted list of (x, y) tiles
    """
    a, b = seg.a, seg.b
    forward = (b.x - a.x, b.y - a.y)
    backward = (a.x - b.x, a.y - b.y)

    result = []
    for tile in _closed_supercover(seg):
        x, y = tile
        touches_a = x <= a.x <= x + 1 and y <= a.y <= y + 1
        touches_b = x <= b.x <= x + 1 and y <= b.y <= y + 1
        if touches_a or touches_b:
            if not (_meets_beyond_endpoint(tile, a, forward) or _meets_beyond_endpoint(tile, b, backward)):
                continue
        if width is not None and not 0 <= x < width:
            continue
        if height is not None and not 0 <= y < height:
            continue
        result.append(tile)
    result.sort(key=lambda t: (t[1], t[0]))
    return result


def rasterize_polygon(poly: Polygon, width: int, height: int) -> np.ndarray:
    """
    Boolean mask of tiles whose centre lies inside the polygon (even-odd rule).

    Args:
        poly: Polygon in tile-corner units
        width: Grid width
        height: Grid height

    Returns:
        Array of shape (height, width)
    """
    mask = np.zeros((height, width), dtype=bool)
    min_x, min_y, max_x, max_y = poly.bbox
    row_lo = max(0, math.floor(min_y))
    row_hi = min(height, math.ceil(max_y))
    for row in range(row_lo, row_hi):
        yc = Fraction(2 * row + 1, 2)
        for ring in poly.rings:
            for _, u, w in ring_edges(ring):
                if (u.y > yc) == (w.y > yc):
                    continue
                x_int = u.x + (yc - u.y) * Fraction(w.x - u.x) / (w.y - u.y)
                # centre i + 1/2 lies left of x_int
                count = min(width, max(0, math.ceil(x_int - Fraction(1, 2))))
                if count:
                    mask[row, :count] ^= True
    return mask
