"""
Integration tests for the analysis pipeline on the shipped map corpus.
"""

import itertools
import math
import unittest
from collections import defaultdict

import numpy as np

from geometry.primitives import polygon_area, polygons_share_boundary, segments_properly_cross
from models.models import ChokeKind, Objective, RegionKind, ZoneClassification
from models.schemas import result_to_json
from nodes.solver import Assignment, brute_force_solve, eval_f_areas, eval_f_sep
from svg_renderer import render_svg
from tests.helpers import MAPS_DIR, corpus_map, deterministic_config
from workflow import analyze, build_run_report, run_pipeline

CORPUS = sorted(path.stem for path in MAPS_DIR.iterdir() if path.suffix in (".txt", ".json"))


class TestCorpus(unittest.TestCase):
    """Structural checks that hold on every corpus map."""

    def test_corpus_is_complete(self):
        """The corpus ships at least eight maps."""
        self.assertGreaterEqual(len(CORPUS), 8)

    def test_feasible_for_ten_seeds(self):
        """Every split zone is cut into one region per cluster, re-checked independently."""
        for name in CORPUS:
            map_data = corpus_map(name)
            for objective, seed in itertools.product(Objective, range(10)):
                with self.subTest(map=name, objective=objective.value, seed=seed):
                    result = analyze(map_data, objective, deterministic_config(seed=seed))
                    self.assertTrue(result.fully_feasible, msg=result.diagnostics)
                    self._check_split_zones(result)

    def _check_split_zones(self, result):
        regions_by_zone = defaultdict(list)
        for region in result.regions:
            regions_by_zone[region.parent_zone].append(region)
        for zone in result.zones:
            if zone.classification is not ZoneClassification.NEEDS_SPLIT:
                continue
            regions = regions_by_zone[zone.id]
            self.assertEqual(len(regions), len(zone.clusters))
            self.assertEqual({r.cluster_id for r in regions}, {c.id for c in zone.clusters})
            cuts = [c.geometry for c in result.choke_points
                    if c.kind is ChokeKind.SEPARATION and c.zone_id == zone.id]
            self.assertEqual(len(cuts), len(zone.clusters) - 1)
            for first, second in itertools.combinations(cuts, 2):
                self.assertFalse(segments_properly_cross(first, second))

    def test_structural_invariants(self):
        """Regions tile the walkable area and ids, areas and graph edges are consistent."""
        for name in CORPUS:
            with self.subTest(map=name):
                map_data = corpus_map(name)
                result = analyze(map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config())

                np.testing.assert_array_equal(result.region_grid > 0, map_data.grid.walkable)
                ids = [r.id for r in result.regions]
                self.assertEqual(len(ids), len(set(ids)))
                self.assertEqual(set(np.unique(result.region_grid).tolist()) - {0}, set(ids))

                for zone in result.zones:
                    zone_area = sum(r.area for r in result.regions if r.parent_zone == zone.id)
                    self.assertEqual(zone_area, polygon_area(zone.contour))

                for u, v in result.adjacency:
                    self.assertLess(u, v)
                    self.assertIn(u, ids)
                    self.assertIn(v, ids)
                self.assertEqual(result.adjacency, sorted(set(result.adjacency)))
                for choke in result.choke_points:
                    u, v = choke.joins
                    self.assertIn((min(u, v), max(u, v)), result.adjacency)

                standard = [r.cluster_id for r in result.regions if r.kind is RegionKind.STANDARD]
                self.assertEqual(len(standard), len(set(standard)))
                self._check_faces_of_split_zones(result)

    def _check_faces_of_split_zones(self, result):
        """Faces of one zone are adjacent exactly when a cut separates them."""
        by_id = {r.id: r for r in result.regions}
        for zone in result.zones:
            faces = [r for r in result.regions if r.parent_zone == zone.id]
            if len(faces) < 2:
                continue
            cuts = {
                tuple(sorted(c.joins)) for c in result.choke_points
                if c.kind is ChokeKind.SEPARATION and c.zone_id == zone.id
            }
            edges = {
                (u, v) for u, v in result.adjacency
                if by_id[u].parent_zone == zone.id and by_id[v].parent_zone == zone.id
            }
            self.assertEqual(edges, cuts)
            for first, second in itertools.combinations(faces, 2):
                pair = (min(first.id, second.id), max(first.id, second.id))
                self.assertEqual(polygons_share_boundary(first.polygon, second.polygon), pair in edges)

    def test_deterministic_output(self):
        """Two seeded deterministic runs serialize and render identically."""
        for name in ("two_base_valley", "oxide_analog"):
            with self.subTest(map=name):
                map_data = corpus_map(name)
                first = analyze(map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config(seed=42))
                second = analyze(map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config(seed=42))
                self.assertEqual(result_to_json(first), result_to_json(second))
                self.assertEqual(render_svg(first, map_data), render_svg(second, map_data))
                self.assertNotIn("stage_ms", result_to_json(first))


class TestTwinSquares(unittest.TestCase):
    """Two square components with resources in four and in three corners."""

    @classmethod
    def setUpClass(cls):
        cls.map_data = corpus_map("twin_squares")

    def test_two_zones_need_splitting(self):
        state = run_pipeline(self.map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config())
        zones = state["zones"]
        self.assertEqual([z.classification for z in zones], [ZoneClassification.NEEDS_SPLIT] * 2)
        self.assertEqual([len(z.clusters) for z in zones], [4, 3])
        self.assertEqual(sorted(state["models"]), [z.id for z in zones])

    def test_shortest_cuts_are_corner_diagonals(self):
        """Cutting corners off along diagonals of length 10 * sqrt(2) is shortest."""
        state = run_pipeline(self.map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config())
        four, three = (brute_force_solve(state["models"][z.id]) for z in state["zones"])
        self.assertAlmostEqual(four.objective_value, 30 * math.sqrt(2))
        self.assertAlmostEqual(three.objective_value, 20 * math.sqrt(2))

    def test_balanced_cuts(self):
        """Balanced areas cut the square in halves, or off its free corner."""
        state = run_pipeline(self.map_data, Objective.LEAST_SQUARES_AREAS, deterministic_config())
        four, three = (brute_force_solve(state["models"][z.id]) for z in state["zones"])
        # areas 50, 150, 50, 150
        self.assertAlmostEqual(four.objective_value, 10000.0)
        # areas 100, 200, 100
        self.assertAlmostEqual(three.objective_value, 20000 / 3)

    def test_corner_triangles_meet_only_at_points(self):
        """Triangles cut off neighbouring corners touch at a point and are not adjacent."""
        result = analyze(self.map_data, "min-sep", deterministic_config())
        self.assertTrue(result.fully_feasible)
        first_zone = result.zones[0].id
        faces = [r for r in result.regions if r.parent_zone == first_zone]
        self.assertEqual(sorted(r.area for r in faces), [50, 50, 50, 250])
        (centre,) = [r.id for r in faces if r.area == 250]
        edges = [(u, v) for u, v in result.adjacency if u in {r.id for r in faces} and v in {r.id for r in faces}]
        self.assertEqual(len(edges), 3)
        self.assertTrue(all(centre in edge for edge in edges))


class TestZeroSolve(unittest.TestCase):
    """The solve stage is skipped when every zone holds at most one cluster."""

    def test_destination_analog(self):
        result = analyze(corpus_map("destination_analog"), "min-sep", deterministic_config())
        self.assertTrue(all(z.classification is not ZoneClassification.NEEDS_SPLIT for z in result.zones))
        self.assertEqual(result.solver_stats, {})
        self.assertEqual(result.stage_ms["solving"], 0.0)
        report = build_run_report(result)
        self.assertEqual(report.zones_solved, 0)
        self.assertEqual(report.mean_candidates, 0.0)
        self.assertTrue(report.feasible)
        self.assertFalse([c for c in result.choke_points if c.kind is ChokeKind.SEPARATION])
        self.assertGreater(len(result.adjacency), 0)


class TestTwoBaseValley(unittest.TestCase):
    """Expected cuts on the two-base valley."""

    @classmethod
    def setUpClass(cls):
        cls.map_data = corpus_map("two_base_valley")
        cls.state = run_pipeline(cls.map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config())
        (cls.zone_id, cls.model), = cls.state["models"].items()

    def test_single_zone_with_two_clusters(self):
        zones = self.state["zones"]
        self.assertEqual(len(zones), 1)
        self.assertEqual(zones[0].tile_count, 484)
        self.assertEqual(len(zones[0].clusters), 2)

    def test_shortest_cut_closes_the_waist(self):
        """The shortest cut spans the waist and leaves areas 224 and 260."""
        result = analyze(self.map_data, "min-sep", deterministic_config())
        self.assertEqual(sorted(r.area for r in result.regions), [224, 260])
        (choke,) = result.choke_points
        self.assertAlmostEqual(choke.geometry.length, 6.0)
        self.assertEqual(result.solver_stats[self.zone_id]["variables"], self.model.variable_count)

    def test_area_objective_balances_regions(self):
        """Balanced areas are reached by a diagonal cut across the waist."""
        result = analyze(self.map_data, "areas", deterministic_config())
        self.assertEqual([r.area for r in result.regions], [242, 242])

    def test_objective_contrast(self):
        """Each exhaustive optimum is no worse than the other on its own objective."""
        by_length = brute_force_solve(self.model)
        areas_model = run_pipeline(self.map_data, Objective.LEAST_SQUARES_AREAS, deterministic_config())["models"]
        by_area = brute_force_solve(next(iter(areas_model.values())))

        def measure(selected):
            assignment = Assignment(self.model, selected)
            return eval_f_sep(assignment), eval_f_areas(assignment)

        length_of_sep, spread_of_sep = measure(by_length.selected)
        length_of_area, spread_of_area = measure(by_area.selected)
        self.assertLessEqual(spread_of_area, spread_of_sep)
        self.assertLessEqual(length_of_sep, length_of_area)
        self.assertEqual(spread_of_area, 0.0)


if __name__ == '__main__':
    unittest.main()
