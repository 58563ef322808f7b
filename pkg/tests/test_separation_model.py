"""
Unit tests for contour enrichment, candidate generation and model assembly.
"""

import itertools
import math
import unittest
from fractions import Fraction

from error_handler import ErrorType, TerrainError
from geometry.chords import ChordRef
from geometry.primitives import Location, Point, Polygon, Segment, point_in_polygon, polygon_area
from geometry.raster import supercover_tiles
from models.models import Objective, Separation
from nodes.separation_model import build_model, enrich_contour, filter_candidate, generate_candidates
from tests.helpers import THREE_CLUSTER_CORRIDOR, ascii_map, clustered_zone


def _edges(ring):
    return [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]


class TestEnrichment(unittest.TestCase):
    """Test cases for contour enrichment."""

    def setUp(self):
        self.map_data = ascii_map(THREE_CLUSTER_CORRIDOR)
        self.zone = clustered_zone(self.map_data, threshold=3.0)

    def test_corridor_contour_is_a_rectangle(self):
        """The simplified corridor contour keeps its four corners."""
        self.assertEqual(set(self.zone.contour.outer), {Point(1, 1), Point(17, 1), Point(17, 4), Point(1, 4)})

    def test_long_edges_are_subdivided(self):
        """No enriched edge is longer than max_edge."""
        enriched = enrich_contour(self.zone.contour, 4.0)
        # 16-long sides in four parts, 3-long sides untouched
        self.assertEqual(len(enriched.outer), 10)
        for u, w in _edges(enriched.outer):
            self.assertLessEqual((w.x - u.x) ** 2 + (w.y - u.y) ** 2, 16)
        self.assertTrue(set(self.zone.contour.outer) <= set(enriched.outer))

    def test_fractional_subdivision_is_exact(self):
        """Inserted points are exact rationals and the area is unchanged."""
        enriched = enrich_contour(self.zone.contour, 3.0)
        self.assertIn(Point(Fraction(11, 3), 1), enriched.outer)
        self.assertEqual(polygon_area(enriched), polygon_area(self.zone.contour))

    def test_short_edges_untouched(self):
        """A contour without long edges is returned with the same vertices."""
        enriched = enrich_contour(self.zone.contour, 100.0)
        self.assertEqual(enriched.outer, self.zone.contour.outer)


class TestCandidates(unittest.TestCase):
    """Test cases for candidate generation and filtering."""

    def setUp(self):
        self.map_data = ascii_map(THREE_CLUSTER_CORRIDOR)
        self.zone = clustered_zone(self.map_data, threshold=3.0)
        self.enriched = enrich_contour(self.zone.contour, 4.0)
        self.candidates = generate_candidates(self.zone, self.enriched, self.map_data)

    def _tentative(self, p, q, ref):
        a, b = (p, q) if p < q else (q, p)
        segment = Segment(a, b)
        return Separation(id=0, a=a, b=b, ref=ref, length=segment.length,
                          covered_tiles=tuple(supercover_tiles(segment)))

    def test_matches_pairwise_enumeration(self):
        """Generation keeps exactly the vertex pairs the filter accepts."""
        vertices = [(p, 0, i) for i, p in enumerate(self.enriched.outer)]
        expected = set()
        for (p, rp, ip), (q, rq, iq) in itertools.combinations(vertices, 2):
            ref = ChordRef(rp, ip, rq, iq) if p < q else ChordRef(rq, iq, rp, ip)
            tentative = self._tentative(p, q, ref)
            if filter_candidate(tentative, self.zone, self.map_data, polygon=self.enriched):
                expected.add((tentative.a, tentative.b))
        self.assertEqual({(c.a, c.b) for c in self.candidates}, expected)

    def test_ids_follow_sorted_endpoints(self):
        """Candidates are numbered 1..k in sorted endpoint order."""
        self.assertEqual([c.id for c in self.candidates], list(range(1, len(self.candidates) + 1)))
        pairs = [(c.a, c.b) for c in self.candidates]
        self.assertEqual(pairs, sorted(pairs))
        self.assertTrue(all(c.a < c.b for c in self.candidates))

    def test_ids_independent_of_start_vertex(self):
        """Rotating the ring does not change the candidate list."""
        ring = self.enriched.outer
        rotated = Polygon(outer=ring[3:] + ring[:3])
        again = generate_candidates(self.zone, rotated, self.map_data)
        self.assertEqual([(c.id, c.a, c.b) for c in again], [(c.id, c.a, c.b) for c in self.candidates])

    def test_kept_candidates_are_valid(self):
        """Kept chords avoid resources and foreign tiles and run inside the zone."""
        resources = self.map_data.resource_tiles()
        for candidate in self.candidates:
            self.assertTrue(set(candidate.covered_tiles) <= self.zone.tiles)
            self.assertFalse(set(candidate.covered_tiles) & resources)
            self.assertIs(point_in_polygon(candidate.segment.midpoint, self.enriched), Location.INSIDE)
            self.assertTrue(math.isclose(candidate.length, candidate.segment.length))

    def test_vertical_cuts(self):
        """Cuts between resources are kept, a cut through a resource is not."""
        pairs = {(c.a, c.b) for c in self.candidates}
        self.assertIn((Point(5, 1), Point(5, 4)), pairs)
        self.assertIn((Point(13, 1), Point(13, 4)), pairs)
        # passes next to the mineral at (8, 2)
        self.assertNotIn((Point(9, 1), Point(9, 4)), pairs)
        # runs along the contour
        self.assertNotIn((Point(1, 1), Point(9, 1)), pairs)

    def test_adjacent_vertices_rejected(self):
        """Two consecutive contour vertices never form a candidate."""
        pairs = {(c.a, c.b) for c in self.candidates}
        for u, w in _edges(self.enriched.outer):
            self.assertNotIn((min(u, w), max(u, w)), pairs)


class TestBuildModel(unittest.TestCase):
    """Test cases for model assembly."""

    def test_model_shape(self):
        """A three-cluster zone needs two separations."""
        map_data = ascii_map(THREE_CLUSTER_CORRIDOR)
        zone = clustered_zone(map_data, threshold=3.0)
        model = build_model(zone, Objective.MIN_SEPARATION_LENGTH, map_data, max_edge=4.0)
        self.assertEqual(model.n_clusters, 3)
        self.assertEqual(model.required_selected, 2)
        self.assertEqual(model.zone_id, zone.id)
        self.assertEqual(set(model.constraints), {"f_cross", "f_clust"})
        self.assertEqual(len(model.cluster_sites), 3)

    def test_model_too_small(self):
        """A zone without enough valid chords raises a recoverable error."""
        map_data = ascii_map("""
            #####
            #m.m#
            #####
        """)
        zone = clustered_zone(map_data, threshold=1.0)
        self.assertEqual(len(zone.clusters), 2)
        with self.assertRaises(TerrainError) as ctx:
            build_model(zone, Objective.MIN_SEPARATION_LENGTH, map_data)
        self.assertEqual(ctx.exception.error_type, ErrorType.MODEL_TOO_SMALL)
        self.assertTrue(ctx.exception.recoverable)


if __name__ == '__main__':
    unittest.main()
