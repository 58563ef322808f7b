"""
Exact geometric primitives over integer and rational coordinates.

Coordinates are ints or fractions.Fraction; every predicate below is exact.
A ring is a tuple of Points without the closing repetition. Rings with a
positive shoelace area have their interior on the left of the traversal
(outer rings); holes run the other way.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Tuple, Union

Coord = Union[int, Fraction]


class Point(NamedTuple):
    """A point in tile-corner units."""
    x: Coord
    y: Coord


Ring = Tuple[Point, ...]
BBox = Tuple[Coord, Coord, Coord, Coord]  # (min_x, min_y, max_x, max_y)


class Location(Enum):
    """Result of a point-in-polygon test."""
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def normalize(value: Coord) -> Coord:
    """Collapse a Fraction with denominator 1 to an int."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def make_point(x: Coord, y: Coord) -> Point:
    return Point(normalize(x), normalize(y))


@dataclass(frozen=True)
class Segment:
    """A segment between two distinct points."""
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"Degenerate segment at {self.a}")

    @property
    def length(self) -> float:
        return math.hypot(float(self.b.x - self.a.x), float(self.b.y - self.a.y))

    @property
    def midpoint(self) -> Point:
        return make_point(Fraction(self.a.x + self.b.x, 2), Fraction(self.a.y + self.b.y, 2))

    @property
    def bbox(self) -> BBox:
        return (min(self.a.x, self.b.x), min(self.a.y, self.b.y),
                max(self.a.x, self.b.x), max(self.a.y, self.b.y))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class Polygon:
    """A polygon with one outer ring and any number of holes."""
    outer: Ring
    holes: Tuple[Ring, ...] = ()

    @property
    def rings(self) -> Tuple[Ring, ...]:
        return (self.outer,) + tuple(self.holes)

    @property
    def bbox(self) -> BBox:
        return bbox_of(self.outer)


def cross(o: Point, a: Point, b: Point) -> Coord:
    """Doubled signed area of triangle (o, a, b)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def _sign(value: Coord) -> int:
    return (value > 0) - (value < 0)


def orientation(o: Point, a: Point, b: Point) -> int:
    return _sign(cross(o, a, b))


def bbox_of(points: Iterable[Point]) -> BBox:
    pts = list(points)
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return (min(xs), min(ys), max(xs), max(ys))


def boxes_overlap(b1: BBox, b2: BBox) -> bool:
    return b1[0] <= b2[2] and b2[0] <= b1[2] and b1[1] <= b2[3] and b2[1] <= b1[3]


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if cross(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_properly_cross(s1: Segment, s2: Segment) -> bool:
    """
    True iff the interiors of two segments intersect.

    Interiors meeting at one point is a crossing; so is a collinear overlap of
    positive length. Sharing an endpoint, or an endpoint of one segment
    touching the other, is not.
    """
    a1, b1, a2, b2 = s1.a, s1.b, s2.a, s2.b
    if not boxes_overlap(s1.bbox, s2.bbox):
        return False

    d1 = orientation(a2, b2, a1)
    d2 = orientation(a2, b2, b1)
    d3 = orientation(a1, b1, a2)
    d4 = orientation(a1, b1, b2)

    if d1 == d2 == d3 == d4 == 0:
        return _collinear_overlap(s1, s2)

    return d1 * d2 < 0 and d3 * d4 < 0


def _collinear_overlap(s1: Segment, s2: Segment) -> bool:
    # extents compared along the dominant axis of s1
    a1, b1, a2, b2 = s1.a, s1.b, s2.a, s2.b
    if a1.x != b1.x:
        lo = max(min(a1.x, b1.x), min(a2.x, b2.x))
        hi = min(max(a1.x, b1.x), max(a2.x, b2.x))
    else:
        lo = max(min(a1.y, b1.y), min(a2.y, b2.y))
        hi = min(max(a1.y, b1.y), max(a2.y, b2.y))
    return hi > lo


def segments_overlap(s1: Segment, s2: Segment) -> bool:
    """True iff two segments are collinear and share a piece of positive length."""
    if not boxes_overlap(s1.bbox, s2.bbox):
        return False
    if orientation(s1.a, s1.b, s2.a) != 0 or orientation(s1.a, s1.b, s2.b) != 0:
        return False
    return _collinear_overlap(s1, s2)


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """True iff the closed segments share at least one point."""
    a1, b1, a2, b2 = s1.a, s1.b, s2.a, s2.b
    if not boxes_overlap(s1.bbox, s2.bbox):
        return False
    d1 = orientation(a2, b2, a1)
    d2 = orientation(a2, b2, b1)
    d3 = orientation(a1, b1, a2)
    d4 = orientation(a1, b1, b2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and point_on_segment(a1, a2, b2))
        or (d2 == 0 and point_on_segment(b1, a2, b2))
        or (d3 == 0 and point_on_segment(a2, a1, b1))
        or (d4 == 0 and point_on_segment(b2, a1, b1))
    )


def ring_edges(ring: Sequence[Point]):
    """Yield (index, start, end) for each edge of a closed ring."""
    n = len(ring)
    for i in range(n):
        yield i, ring[i], ring[(i + 1) % n]


def ring_signed_area2(ring: Sequence[Point]) -> Coord:
    """Doubled shoelace area; positive for rings with interior on the left."""
    total = 0
    n = len(ring)
    for i in range(n):
        p, q = ring[i], ring[(i + 1) % n]
        total += p.x * q.y - p.y * q.x
    return total


def ring_signed_area(ring: Sequence[Point]) -> Coord:
    return normalize(Fraction(ring_signed_area2(ring), 2))


def polygon_area(poly: Polygon) -> Coord:
    """
    Area in square tiles: outer ring minus holes, exact.

    Args:
        poly: Polygon to measure

    Returns:
        int or Fraction area
    """
    area2 = abs(ring_signed_area2(poly.outer))
    for hole in poly.holes:
        area2 -= abs(ring_signed_area2(hole))
    return normalize(Fraction(area2, 2))


def ray_crosses_edge(q: Point, u: Point, w: Point) -> bool:
    """Half-open test: does the ray from q towards +x cross edge (u, w)?"""
    if (u.y > q.y) == (w.y > q.y):
        return False
    num = (u.x - q.x) * (w.y - u.y) + (q.y - u.y) * (w.x - u.x)
    return num * (w.y - u.y) > 0


def point_in_ring(p: Point, ring: Sequence[Point]) -> Location:
    """Even-odd point location against one closed ring."""
    inside = False
    for _, u, w in ring_edges(ring):
        if point_on_segment(p, u, w):
            return Location.BOUNDARY
        if ray_crosses_edge(p, u, w):
            inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def point_in_polygon(p: Point, poly: Polygon) -> Location:
    """
    Locate a point against a polygon with holes.

    Args:
        p: Point to locate
        poly: Polygon

    Returns:
        Location.INSIDE, Location.BOUNDARY or Location.OUTSIDE
    """
    where = point_in_ring(p, poly.outer)
    if where is not Location.INSIDE:
        return where
    for hole in poly.holes:
        hole_where = point_in_ring(p, hole)
        if hole_where is Location.BOUNDARY:
            return Location.BOUNDARY
        if hole_where is Location.INSIDE:
            return Location.OUTSIDE
    return Location.INSIDE


def rings_properly_intersect(rings: Sequence[Sequence[Point]]) -> bool:
    """
    True if any two non-adjacent edges of the given rings properly cross.

    Rings that merely touch at a vertex (pinched tracings) do not count.
    """
    edges = []
    for r, ring in enumerate(rings):
        n = len(ring)
        for i, u, w in ring_edges(ring):
            if u != w:
                edges.append((r, i, n, Segment(u, w)))

    edges.sort(key=lambda e: e[3].bbox[0])
    for idx, (r1, i1, n1, s1) in enumerate(edges):
        box1 = s1.bbox
        for r2, i2, _, s2 in edges[idx + 1:]:
            if s2.bbox[0] > box1[2]:
                break
            if r1 == r2 and ((i1 - i2) % n1 in (1, n1 - 1)):
                continue
            if segments_properly_cross(s1, s2):
                return True
    return False


def polygons_share_boundary(first: Polygon, second: Polygon) -> bool:
    """
    True iff the rings of two polygons share a piece of boundary of positive length.

    Polygons meeting at isolated points only do not share a boundary.
    """
    if not boxes_overlap(first.bbox, second.bbox):
        return False
    theirs = [Segment(u, w) for ring in second.rings for _, u, w in ring_edges(ring) if u != w]
    for ring in first.rings:
        for _, u, w in ring_edges(ring):
            if u == w:
                continue
            edge = Segment(u, w)
            if any(segments_overlap(edge, other) for other in theirs):
                return True
    return False


def squared_distance_to_segment(p: Point, a: Point, b: Point) -> Coord:
    """Exact squared distance from p to the closed segment [a, b]."""
    dx, dy = b.x - a.x, b.y - a.y
    length2 = dx * dx + dy * dy
    if length2 == 0:
        return (p.x - a.x) ** 2 + (p.y - a.y) ** 2
    t = Fraction((p.x - a.x) * dx + (p.y - a.y) * dy) / length2
    if t <= 0:
        return (p.x - a.x) ** 2 + (p.y - a.y) ** 2
    if t >= 1:
        return (p.x - b.x) ** 2 + (p.y - b.y) ** 2
    cx = a.x + t * dx
    cy = a.y + t * dy
    return (p.x - cx) ** 2 + (p.y - cy) ** 2


def tile_center(x: int, y: int) -> Point:
    return Point(Fraction(2 * x + 1, 2), Fraction(2 * y + 1, 2))


def parse_coord(value) -> Coord:
    """Read a coordinate back from its decimal text or number form."""
    if isinstance(value, int):
        return value
    return normalize(Fraction(str(value)))
