"""
Unit tests for the exact geometry package.

Tests orientation and point location, chord splitting with exact areas,
supercover rasterization against a brute-force clipping oracle, the spatial
index against a linear scan, and contour simplification.
"""

import random
import unittest
from fractions import Fraction

import numpy as np

from error_handler import ErrorType, TerrainError
from geometry.chords import ChordArrangement, ChordRef, chord_stays_inside, split_by_chords
from geometry.primitives import (
    Location,
    Point,
    Polygon,
    Segment,
    boxes_overlap,
    point_in_polygon,
    polygon_area,
    polygons_share_boundary,
    ring_signed_area,
    segments_overlap,
    segments_properly_cross,
)
from geometry.raster import rasterize_polygon, supercover_tiles
from geometry.simplify import simplify
from geometry.spatial_index import SpatialIndex
from tests.helpers import rect

OCTAGON = Polygon(outer=(
    Point(2, 0), Point(4, 0), Point(6, 2), Point(6, 4),
    Point(4, 6), Point(2, 6), Point(0, 4), Point(0, 2),
))

L_SHAPE = Polygon(outer=(
    Point(0, 0), Point(4, 0), Point(4, 2), Point(2, 2), Point(2, 4), Point(0, 4),
))


def _clip_interval(seg: Segment, tile):
    """Parameter interval of the segment inside the closed tile square, or None."""
    x, y = tile
    lo, hi = Fraction(0), Fraction(1)
    for a, d, t_min, t_max in (
        (seg.a.x, seg.b.x - seg.a.x, x, x + 1),
        (seg.a.y, seg.b.y - seg.a.y, y, y + 1),
    ):
        if d == 0:
            if not t_min <= a <= t_max:
                return None
            continue
        t0, t1 = Fraction(t_min - a) / d, Fraction(t_max - a) / d
        lo, hi = max(lo, min(t0, t1)), min(hi, max(t0, t1))
        if lo > hi:
            return None
    return lo, hi


def _brute_force_tiles(seg: Segment, size: int):
    tiles = set()
    for y in range(size):
        for x in range(size):
            interval = _clip_interval(seg, (x, y))
            if interval is None:
                continue
            lo, hi = interval
            # met only at an endpoint
            if hi == 0 or lo == 1:
                continue
            tiles.add((x, y))
    return tiles


class TestPrimitives(unittest.TestCase):
    """Test cases for points, segments and polygons."""

    def test_orientation_is_positive_for_outer_rings(self):
        """Outer rings have positive signed area."""
        self.assertEqual(ring_signed_area(rect(0, 0, 3, 2).outer), 6)
        self.assertEqual(ring_signed_area(OCTAGON.outer), 28)
        self.assertEqual(ring_signed_area(tuple(reversed(OCTAGON.outer))), -28)

    def test_polygon_area_subtracts_holes(self):
        """Hole area is removed from the outer area."""
        hole = tuple(reversed(rect(1, 1, 3, 3).outer))
        poly = Polygon(outer=rect(0, 0, 4, 4).outer, holes=(hole,))
        self.assertEqual(polygon_area(poly), 12)

    def test_point_location(self):
        """Points are inside, on the boundary or outside."""
        self.assertIs(point_in_polygon(Point(3, 3), OCTAGON), Location.INSIDE)
        self.assertIs(point_in_polygon(Point(3, 0), OCTAGON), Location.BOUNDARY)
        self.assertIs(point_in_polygon(Point(5, 1), OCTAGON), Location.BOUNDARY)
        self.assertIs(point_in_polygon(Point(Fraction(1, 2), Fraction(1, 2)), OCTAGON), Location.OUTSIDE)
        self.assertIs(point_in_polygon(Point(3, 3), L_SHAPE), Location.OUTSIDE)

    def test_proper_crossing(self):
        """Segments sharing an endpoint or touching do not properly cross."""
        a = Segment(Point(0, 0), Point(4, 4))
        self.assertTrue(segments_properly_cross(a, Segment(Point(0, 4), Point(4, 0))))
        self.assertFalse(segments_properly_cross(a, Segment(Point(4, 4), Point(8, 0))))
        self.assertFalse(segments_properly_cross(a, Segment(Point(2, 2), Point(4, 0))))
        self.assertFalse(segments_properly_cross(a, Segment(Point(1, 0), Point(5, 4))))
        # collinear
        self.assertTrue(segments_properly_cross(a, Segment(Point(2, 2), Point(6, 6))))
        self.assertFalse(segments_properly_cross(a, Segment(Point(4, 4), Point(6, 6))))

    def test_collinear_overlap(self):
        """Only collinear pieces of positive length overlap."""
        a = Segment(Point(0, 0), Point(4, 0))
        self.assertTrue(segments_overlap(a, Segment(Point(3, 0), Point(6, 0))))
        self.assertTrue(segments_overlap(a, Segment(Point(1, 0), Point(2, 0))))
        self.assertFalse(segments_overlap(a, Segment(Point(4, 0), Point(6, 0))))
        self.assertFalse(segments_overlap(a, Segment(Point(2, 0), Point(2, 3))))
        self.assertFalse(segments_overlap(a, Segment(Point(0, 1), Point(4, 1))))

    def test_shared_boundary(self):
        """Polygons share a boundary along an edge piece, not at a single point."""
        self.assertTrue(polygons_share_boundary(rect(0, 0, 2, 2), rect(2, 1, 4, 3)))
        self.assertFalse(polygons_share_boundary(rect(0, 0, 2, 2), rect(2, 2, 4, 4)))
        self.assertFalse(polygons_share_boundary(rect(0, 0, 2, 2), rect(3, 0, 5, 2)))
        first = Polygon(outer=(Point(0, 0), Point(2, 0), Point(2, 2)))
        second = Polygon(outer=(Point(2, 2), Point(2, 4), Point(0, 4)))
        self.assertFalse(polygons_share_boundary(first, second))

    def test_degenerate_segment_rejected(self):
        """A segment needs two distinct points."""
        with self.assertRaises(ValueError):
            Segment(Point(1, 1), Point(1, 1))


class TestChords(unittest.TestCase):
    """Test cases for chord splitting."""

    def test_octagon_two_chords_three_faces(self):
        """Two non-crossing chords cut an octagon into three faces."""
        chords = [Segment(Point(2, 0), Point(2, 6)), Segment(Point(4, 0), Point(4, 6))]
        parts = split_by_chords(OCTAGON, chords)

        # Euler: F = E - V + 2, minus the outer face
        vertices = len(OCTAGON.outer)
        edges = len(OCTAGON.outer) + len(chords)
        self.assertEqual(len(parts), edges - vertices + 1)
        self.assertEqual(sorted(polygon_area(p) for p in parts), [8, 8, 12])

    def test_fractional_endpoints_keep_exact_area(self):
        """Chord endpoints between vertices are inserted exactly."""
        half = Fraction(5, 2)
        parts = split_by_chords(OCTAGON, [Segment(Point(half, 0), Point(half, 6))])
        self.assertEqual(len(parts), 2)
        self.assertEqual(sum(polygon_area(p) for p in parts), 28)
        self.assertTrue(all(isinstance(polygon_area(p), (int, Fraction)) for p in parts))

    def test_random_chords_partition_area_exactly(self):
        """Areas of the two sides of a random chord sum to the parent area."""
        rng = random.Random(11)
        box = rect(0, 0, 12, 8)

        def boundary_point(edge):
            t = Fraction(rng.randint(1, 15), 16)
            return {
                0: Point(12 * t, 0),
                1: Point(12, 8 * t),
                2: Point(12 * t, 8),
                3: Point(0, 8 * t),
            }[edge]

        for _ in range(1000):
            first, second = rng.sample(range(4), 2)
            chord = Segment(boundary_point(first), boundary_point(second))
            parts = split_by_chords(box, [chord])
            self.assertEqual(len(parts), 2)
            self.assertEqual(sum(polygon_area(p) for p in parts), 96)
            self.assertTrue(all(polygon_area(p) > 0 for p in parts))

    def test_endpoint_off_boundary(self):
        """An endpoint inside the polygon is rejected."""
        with self.assertRaises(TerrainError) as ctx:
            split_by_chords(OCTAGON, [Segment(Point(3, 3), Point(2, 0))])
        self.assertEqual(ctx.exception.error_type, ErrorType.CHORD_NOT_ON_RING)

    def test_chord_leaving_polygon(self):
        """A chord across the notch of an L leaves the polygon."""
        with self.assertRaises(TerrainError) as ctx:
            split_by_chords(L_SHAPE, [Segment(Point(4, 2), Point(2, 4))])
        self.assertEqual(ctx.exception.error_type, ErrorType.CHORD_EXITS_POLYGON)

    def test_chord_through_third_boundary_point(self):
        """A chord touching the contour between its endpoints does not stay inside."""
        self.assertFalse(chord_stays_inside(L_SHAPE, Segment(Point(4, 2), Point(0, 2))))
        self.assertTrue(chord_stays_inside(L_SHAPE, Segment(Point(2, 2), Point(2, 0))))

    def test_arrangement_locates_sites(self):
        """Sites are located in the face that contains them."""
        arrangement = ChordArrangement(OCTAGON, sites=[Point(1, 3), Point(5, 3), Point(2, 3)])
        face_set = arrangement.trace([ChordRef(0, 0, 0, 5)])
        self.assertEqual(len(face_set.faces), 2)
        left = arrangement.locate_site(face_set, 0)
        right = arrangement.locate_site(face_set, 1)
        self.assertIsNotNone(left)
        self.assertIsNotNone(right)
        self.assertNotEqual(left, right)
        # on the chord itself
        self.assertIsNone(arrangement.locate_site(face_set, 2))
        self.assertEqual(sum(face.area for face in face_set.faces), 28)


class TestRaster(unittest.TestCase):
    """Test cases for supercover and polygon rasterization."""

    def test_supercover_matches_brute_force(self):
        """Supercover equals the tiles a brute-force clipper finds."""
        rng = random.Random(5)
        size = 16
        cases = 0
        while cases < 1000:
            a = Point(Fraction(rng.randint(0, 2 * size), 2), Fraction(rng.randint(0, 2 * size), 2))
            b = Point(Fraction(rng.randint(0, 2 * size), 2), Fraction(rng.randint(0, 2 * size), 2))
            if a == b:
                continue
            cases += 1
            seg = Segment(a, b)
            self.assertEqual(set(supercover_tiles(seg, size, size)), _brute_force_tiles(seg, size), msg=str(seg))

    def test_supercover_of_axis_segment(self):
        """A segment along a tile edge touches the tiles on both sides."""
        tiles = supercover_tiles(Segment(Point(2, 1), Point(2, 3)))
        self.assertEqual(tiles, [(1, 1), (2, 1), (1, 2), (2, 2)])

    def test_rasterize_rectangle(self):
        """Tiles whose centre lies inside a rectangle are selected."""
        mask = rasterize_polygon(rect(1, 1, 3, 3), 5, 5)
        expected = np.zeros((5, 5), dtype=bool)
        expected[1:3, 1:3] = True
        np.testing.assert_array_equal(mask, expected)


class TestSpatialIndex(unittest.TestCase):
    """Test cases for the R-tree wrapper."""

    def test_query_matches_linear_scan(self):
        """Queries return exactly the overlapping boxes."""
        rng = random.Random(3)
        boxes = []
        for _ in range(100):
            x, y = rng.randint(0, 50), rng.randint(0, 50)
            boxes.append((x, y, x + rng.randint(0, 8), y + rng.randint(0, 8)))
        spatial = SpatialIndex.from_boxes(boxes)
        self.assertEqual(len(spatial), 100)

        for _ in range(50):
            x, y = rng.randint(0, 50), rng.randint(0, 50)
            query = (x, y, x + rng.randint(0, 10), y + rng.randint(0, 10))
            expected = [i for i, box in enumerate(boxes) if boxes_overlap(box, query)]
            self.assertEqual(spatial.query(query), expected)


class TestSimplify(unittest.TestCase):
    """Test cases for contour simplification."""

    STAIRCASE = (
        Point(0, 0), Point(4, 0), Point(4, 1), Point(3, 1), Point(3, 2),
        Point(2, 2), Point(2, 3), Point(1, 3), Point(1, 4), Point(0, 4),
    )

    def test_staircase_loses_vertices(self):
        """Stair steps within epsilon are removed."""
        simplified = simplify(self.STAIRCASE, 1.0)
        self.assertLess(len(simplified), len(self.STAIRCASE))
        self.assertTrue(set(simplified) <= set(self.STAIRCASE))
        self.assertGreater(ring_signed_area(simplified), 0)

    def test_zero_epsilon_keeps_ring(self):
        """Epsilon 0 returns the ring unchanged."""
        self.assertEqual(simplify(self.STAIRCASE, 0.0), self.STAIRCASE)

    def test_degenerate_ring(self):
        """Rings without area are rejected."""
        with self.assertRaises(TerrainError) as ctx:
            simplify((Point(0, 0), Point(2, 0), Point(4, 0)), 1.0)
        self.assertEqual(ctx.exception.error_type, ErrorType.DEGENERATE_RING)


if __name__ == '__main__':
    unittest.main()
