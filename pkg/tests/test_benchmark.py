"""
Unit tests for the benchmark and oracle-check harnesses.
"""

import shutil
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from benchmark import RAW_COLUMNS, corpus_paths, format_table, run_benchmark, summarize, write_raw_csv
from error_handler import ErrorType, TerrainError
from models.models import Objective, Solution
from oracle_check import check_map, near_optimal, objectives_match, summary_lines
from tests.helpers import MAPS_DIR, THREE_CLUSTER_CORRIDOR, ascii_map, corpus_map, deterministic_config
from workflow import STAGES


def _solution(value: float, feasible: bool = True) -> Solution:
    return Solution(zone_id=1, selected=(), constraint_error=0 if feasible else 1,
                    objective_value=value, feasible=feasible)


class TestSummaries(unittest.TestCase):
    """Test cases for the per-map statistics."""

    RAW = pd.DataFrame(
        [("a", 0, "total", 10.0), ("a", 1, "total", 20.0), ("a", 2, "total", 60.0),
         ("a", 0, "solving", 5.0), ("b", 0, "total", 4.0)],
        columns=RAW_COLUMNS,
    )

    def test_median_mean_population_std(self):
        summary = summarize(self.RAW)
        self.assertEqual(list(summary.index), ["a", "b"])
        self.assertEqual(summary.loc["a", "median"], 20.0)
        self.assertEqual(summary.loc["a", "mean"], 30.0)
        # population std of 10, 20, 60
        self.assertAlmostEqual(summary.loc["a", "std"], (1400 / 3) ** 0.5)
        self.assertEqual(summary.loc["a", "runs"], 3)
        self.assertEqual(summary.loc["b", "std"], 0.0)

    def test_single_stage(self):
        summary = summarize(self.RAW, stage="solving")
        self.assertEqual(list(summary.index), ["a"])
        self.assertEqual(summary.loc["a", "median"], 5.0)

    def test_table_headers(self):
        table = format_table(summarize(self.RAW))
        for header in ("Median runtime (ms)", "Mean runtime (ms)", "Pop. std dev (ms)", "Runs"):
            self.assertIn(header, table)


class TestRunBenchmark(unittest.TestCase):
    """Test cases for collecting raw samples."""

    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_samples_per_stage_and_total(self):
        shutil.copy(MAPS_DIR / "island.txt", self.tmp)
        (self.tmp / "notes.md").write_text("not a map", encoding="utf-8")
        paths = corpus_paths(self.tmp)
        self.assertEqual([p.name for p in paths], ["island.txt"])

        raw = run_benchmark(paths, seeds=[0, 1], repetitions=3, config=deterministic_config())
        self.assertEqual(list(raw.columns), RAW_COLUMNS)
        self.assertEqual(len(raw), 3 * (len(STAGES) + 1))
        totals = raw[raw["stage"] == "total"]
        self.assertEqual(totals["rep"].tolist(), [0, 1, 2])
        self.assertTrue((totals["ms"] >= 0).all())

        path = write_raw_csv(raw, self.tmp / "raw.csv")
        self.assertEqual(len(pd.read_csv(path)), len(raw))

        with self.assertRaises(TerrainError) as ctx:
            write_raw_csv(raw, self.tmp / "missing" / "raw.csv")
        self.assertEqual(ctx.exception.error_type, ErrorType.IO_ERROR)

    def test_corpus_must_be_a_directory(self):
        with self.assertRaises(TerrainError) as ctx:
            corpus_paths(self.tmp / "missing")
        self.assertEqual(ctx.exception.error_type, ErrorType.IO_ERROR)


class TestOracleCheck(unittest.TestCase):
    """Test cases for comparing the solver with exhaustive optima."""

    def test_match_rules(self):
        optimum = _solution(6.0)
        self.assertTrue(objectives_match(_solution(6.0), optimum))
        self.assertFalse(objectives_match(_solution(6.5), optimum))
        self.assertFalse(objectives_match(_solution(6.0, feasible=False), optimum))
        self.assertTrue(objectives_match(_solution(9.0, feasible=False), _solution(3.0, feasible=False)))
        self.assertTrue(near_optimal(_solution(6.5), optimum))
        self.assertFalse(near_optimal(_solution(7.0), optimum))

    def test_corridor_zone(self):
        """Seeded runs on the corridor reach the exhaustive optimum."""
        map_data = ascii_map(THREE_CLUSTER_CORRIDOR)
        config = deterministic_config(cluster_threshold=3.0, max_edge=4.0)
        (check,) = check_map(map_data, seeds=range(5), config=config)
        self.assertFalse(check.skipped)
        self.assertEqual(check.n_clusters, 3)
        self.assertTrue(check.oracle_feasible)
        self.assertAlmostEqual(check.optimum, 6.0)
        self.assertEqual(check.runs, 5)
        self.assertEqual(check.feasible_runs, 5)
        self.assertEqual(check.feasibility_rate, 1.0)
        self.assertGreaterEqual(check.matches, 4)
        self.assertEqual(len(check.objectives), 5)

        lines = summary_lines(map_data.name, [check])
        self.assertEqual(lines[0], "map: fixture")
        self.assertIn("optimum 6.000", lines[1])
        self.assertIn("overall:", lines[-1])

    def test_zone_over_enumeration_limit_is_skipped(self):
        map_data = ascii_map(THREE_CLUSTER_CORRIDOR)
        config = deterministic_config(cluster_threshold=3.0, max_edge=4.0, brute_force_limit=1)
        (check,) = check_map(map_data, seeds=[0], config=config)
        self.assertTrue(check.skipped)
        self.assertEqual(check.runs, 0)
        self.assertIn("skipped", check.line())
        self.assertIn("no tractable zone", summary_lines("fixture", [check])[-1])

    def test_tractable_corpus_zones(self):
        """On every enumerable corpus zone 95 of 100 seeds are optimal and all are within 10%."""
        tractable = 0
        for path in corpus_paths(MAPS_DIR):
            map_data = corpus_map(path.stem)
            for objective in Objective:
                for check in check_map(map_data, seeds=range(100), objective=objective, config=deterministic_config()):
                    if check.skipped:
                        continue
                    tractable += 1
                    with self.subTest(map=path.stem, objective=objective.value, zone=check.zone_id):
                        self.assertEqual(check.runs, 100)
                        self.assertGreaterEqual(check.matches, 95, msg=check.line())
                        self.assertEqual(check.near_optimal, 100, msg=check.line())
        # twin_squares alone holds zones of four and three clusters, for both objectives
        self.assertGreaterEqual(tractable, 4)

    def test_map_without_split_zones(self):
        self.assertEqual(check_map(ascii_map("""
            ######
            #m...#
            ######
        """), seeds=[0], config=deterministic_config()), [])


if __name__ == '__main__':
    unittest.main()
