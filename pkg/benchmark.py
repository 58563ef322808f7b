"""
Self-benchmark over a corpus of maps.

Each map is analyzed several times; the per-stage wall times of every run are
collected as raw samples and summarized per map by median, mean and
population standard deviation of the total run time.

Requirements addressed:
- Median, mean and population standard deviation of run times per map
- Raw samples exportable as CSV with columns map, rep, stage, ms
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from config import AppConfig, get_config
from data_sources import load_map_file
from error_handler import ErrorType, TerrainError, error_handler_decorator
from models.models import Objective
from workflow import STAGES, analyze

logger = logging.getLogger(__name__)

MAP_SUFFIXES = (".json", ".txt", ".map", ".ascii")
RAW_COLUMNS = ["map", "rep", "stage", "ms"]


def corpus_paths(directory: Union[str, Path]) -> List[Path]:
    """
    Map files of a directory, sorted by name.

    Raises:
        TerrainError: IO_ERROR if directory is not a directory
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise TerrainError(ErrorType.IO_ERROR, f"{directory} is not a directory", details={"path": str(directory)})
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix.lower() in MAP_SUFFIXES)


def run_benchmark(
    paths: Sequence[Union[str, Path]],
    seeds: Sequence[int] = (0,),
    repetitions: int = 5,
    objective: Union[Objective, str] = Objective.MIN_SEPARATION_LENGTH,
    config: Optional[AppConfig] = None
) -> pd.DataFrame:
    """
    Analyze every map repeatedly and collect raw timing samples.

    Repetition r runs with seed seeds[r % len(seeds)].

    Args:
        paths: Map files
        seeds: Solver seeds
        repetitions: Runs per map
        objective: Objective of the separation problems
        config: Configuration (global configuration when omitted)

    Returns:
        DataFrame with columns map, rep, stage, ms; stage "total" holds the
        sum of the stages of a run
    """
    config = config or get_config()
    seeds = list(seeds) or [config.solver.seed]
    rows = []
    for path in paths:
        map_data = load_map_file(path)
        for rep in range(repetitions):
            run_config = replace(config, solver=replace(config.solver, seed=seeds[rep % len(seeds)]))
            result = analyze(map_data, objective, run_config)
            for stage in STAGES:
                rows.append((map_data.name, rep, stage, result.stage_ms.get(stage, 0.0)))
            rows.append((map_data.name, rep, "total", result.total_wall_time_ms))
        logger.info(f"Benchmarked {map_data.name!r} over {repetitions} repetitions")
    return pd.DataFrame(rows, columns=RAW_COLUMNS)


def summarize(raw: pd.DataFrame, stage: str = "total") -> pd.DataFrame:
    """
    Per-map statistics of one stage.

    Args:
        raw: Raw samples from run_benchmark
        stage: Stage to summarize

    Returns:
        DataFrame indexed by map with columns median, mean, std (population)
        and runs, in the order maps were benchmarked
    """
    samples = raw[raw["stage"] == stage]
    summary = samples.groupby("map", sort=False)["ms"].agg(
        median="median",
        mean="mean",
        std=lambda s: s.std(ddof=0),
        runs="count",
    )
    return summary


def format_table(summary: pd.DataFrame) -> str:
    """Render a summary as a fixed-width text table."""
    table = summary.rename(columns={
        "median": "Median runtime (ms)",
        "mean": "Mean runtime (ms)",
        "std": "Pop. std dev (ms)",
        "runs": "Runs",
    })
    return table.to_string(float_format=lambda v: f"{v:.2f}")


@error_handler_decorator(ErrorType.IO_ERROR)
def write_raw_csv(raw: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    raw.to_csv(path, index=False, columns=RAW_COLUMNS)
    logger.info(f"Wrote {len(raw)} raw samples to {path}")
    return path
