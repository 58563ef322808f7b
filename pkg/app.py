"""
Terrain Regions - Command-line entry point

Analyzes RTS maps into regions holding at most one resource cluster each,
renders the results as SVG figures, and runs the benchmark and oracle
harnesses.

Requirements addressed:
- analyze writes result JSON and/or SVG and prints a run report
- Exit status 0 on full feasibility, 2 when some zone stayed unsplit, 1 on input errors
- bench reports median, mean and population standard deviation per map
- oracle-check reports optimum-match and feasibility rates per tractable zone
- render, destroy, config and convert commands
"""

import logging
import sys
from dataclasses import replace
from functools import wraps
from pathlib import Path
from typing import Callable, Optional

import click
from dotenv import load_dotenv

from benchmark import corpus_paths, format_table, run_benchmark, summarize, write_raw_csv
from config import AppConfig, get_config, print_config
from data_sources import MapFormat, apply_obstacle_destruction, format_for_path, load_map_file, save_map
from error_handler import ErrorType, TerrainError, exit_code_for, get_user_friendly_message
from logging_config import configure_from_config
from models.schemas import result_from_json, result_to_json
from oracle_check import check_map, summary_lines
from svg_renderer import save_svg
from validators import validate_epsilon, validate_positive, validate_seed
from workflow import analyze as run_analysis
from workflow import build_run_report, merge_and_resolve

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

OBJECTIVES = click.Choice(["min-sep", "areas"])


def _report_error(error: Exception) -> None:
    if isinstance(error, TerrainError):
        click.echo(f"error: {error.message}", err=True)
        click.echo(get_user_friendly_message(error.error_type), err=True)
    else:
        click.echo(f"error: {error}", err=True)


def cli_errors(func: Callable) -> Callable:
    """Turn errors reaching a command into a message on stderr and an exit status."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TerrainError as e:
            logger.debug(f"{func.__name__} failed: {e.to_dict()}")
            _report_error(e)
            sys.exit(exit_code_for(e))
    return wrapper


def solver_options(func: Callable) -> Callable:
    """Options shared by every command that runs the analysis."""
    options = [
        click.option("--objective", type=OBJECTIVES, default="min-sep", show_default=True,
                     help="Objective of the separation problems"),
        click.option("--seed", type=int, default=None, help="Solver seed (unsigned 64-bit)"),
        click.option("--timeout-ms-per-cluster", type=int, default=None,
                     help="Time budget of a zone per cluster, in ms"),
        click.option("--max-retries", type=int, default=None, help="Relaunches with a doubled budget"),
        click.option("--epsilon", type=float, default=None, help="Contour simplification tolerance, in tiles"),
        click.option("--cluster-threshold", type=float, default=None,
                     help="Single-linkage distance between resources of a cluster, in tiles"),
        click.option("--max-edge", type=float, default=None, help="Longest contour edge after enrichment"),
        click.option("--deterministic", is_flag=True, default=False,
                     help="Count solver budgets in iterations instead of milliseconds"),
        click.option("--iterations-per-100ms", type=int, default=None,
                     help="Deterministic iteration budget per 100 ms of nominal budget"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(
    seed: Optional[int] = None,
    timeout_ms_per_cluster: Optional[int] = None,
    max_retries: Optional[int] = None,
    epsilon: Optional[float] = None,
    cluster_threshold: Optional[float] = None,
    max_edge: Optional[float] = None,
    deterministic: bool = False,
    iterations_per_100ms: Optional[int] = None
) -> AppConfig:
    """
    Apply command-line overrides to the environment configuration.

    Raises:
        TerrainError: MAP_VALIDATION_ERROR for out-of-range flag values,
            CONFIGURATION_ERROR if the combined configuration is invalid
    """
    config = get_config()
    geometry, zoning, solver = config.geometry, config.zoning, config.solver
    if epsilon is not None:
        geometry = replace(geometry, epsilon=validate_epsilon(epsilon))
    if max_edge is not None:
        geometry = replace(geometry, max_edge=validate_positive(max_edge, "max-edge"))
    if cluster_threshold is not None:
        zoning = replace(zoning, cluster_threshold=validate_positive(cluster_threshold, "cluster-threshold"))
    if seed is not None:
        solver = replace(solver, seed=validate_seed(seed))
    if timeout_ms_per_cluster is not None:
        solver = replace(solver, base_timeout_ms_per_cluster=timeout_ms_per_cluster)
    if max_retries is not None:
        solver = replace(solver, max_retries_with_doubling=max_retries)
    if deterministic:
        solver = replace(solver, deterministic=True)
    if iterations_per_100ms is not None:
        solver = replace(solver, iterations_per_100ms=iterations_per_100ms)

    config = replace(config, geometry=geometry, zoning=zoning, solver=solver)
    try:
        config.validate()
    except ValueError as e:
        raise TerrainError(ErrorType.CONFIGURATION_ERROR, str(e))
    return config


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise TerrainError(ErrorType.IO_ERROR, f"Cannot write {path}: {e.strerror}", details={"path": str(path)})


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise TerrainError(ErrorType.IO_ERROR, f"Cannot read {path}: {e.strerror}", details={"path": str(path)})


@click.group(help="Split RTS maps into regions holding at most one resource cluster each.")
@click.option("--log-level", default=None, help="Console log level (overrides LOG_LEVEL)")
def terrain(log_level: Optional[str]):
    config = get_config()
    if log_level:
        config = replace(config, logging=replace(config.logging, log_level=log_level.upper()))
    configure_from_config(config)


@terrain.command(help="Analyze a map and print a run report")
@click.argument("map_path", type=click.Path(path_type=Path))
@solver_options
@click.option("--json", "json_path", type=click.Path(path_type=Path), default=None, help="Write the result JSON")
@click.option("--svg", "svg_path", type=click.Path(path_type=Path), default=None, help="Write an SVG figure")
@cli_errors
def analyze(map_path: Path, objective: str, json_path: Optional[Path], svg_path: Optional[Path], **flags):
    config = build_config(**flags)
    map_data = load_map_file(map_path)
    result = run_analysis(map_data, objective, config)

    if json_path is not None:
        _write_text(json_path, result_to_json(result))
    if svg_path is not None:
        save_svg(result, map_data, svg_path, tile_px=config.output.svg_tile_px)
    for line in build_run_report(result).lines():
        click.echo(line)
    for diagnostic in result.diagnostics:
        click.echo(f"zone {diagnostic['zone']}: {diagnostic['error_type']}: {diagnostic['message']}", err=True)
    sys.exit(0 if result.fully_feasible else 2)


@terrain.command(help="Benchmark every map of a directory")
@click.argument("corpus_dir", type=click.Path(path_type=Path))
@solver_options
@click.option("--seeds", default="0", show_default=True, help="Comma-separated seeds, cycled over repetitions")
@click.option("--repetitions", type=int, default=5, show_default=True, help="Runs per map")
@click.option("--raw-csv", type=click.Path(path_type=Path), default=None, help="Write raw samples as CSV")
@cli_errors
def bench(corpus_dir: Path, objective: str, seeds: str, repetitions: int, raw_csv: Optional[Path], **flags):
    config = build_config(**flags)
    paths = corpus_paths(corpus_dir)
    if not paths:
        raise TerrainError(ErrorType.IO_ERROR, f"No map files in {corpus_dir}", details={"path": str(corpus_dir)})
    raw = run_benchmark(paths, seeds=_parse_seeds(seeds), repetitions=repetitions,
                        objective=objective, config=config)
    click.echo(format_table(summarize(raw)))
    if raw_csv is not None:
        write_raw_csv(raw, raw_csv)


@terrain.command("oracle-check", help="Compare solver runs with brute-force optima")
@click.argument("map_path", type=click.Path(path_type=Path))
@solver_options
@click.option("--seeds", default="0-99", show_default=True, help="Seeds as a list (1,2,3) or a range (0-99)")
@cli_errors
def oracle_check(map_path: Path, objective: str, seeds: str, **flags):
    config = build_config(**flags)
    map_data = load_map_file(map_path)
    checks = check_map(map_data, _parse_seeds(seeds), objective, config)
    for line in summary_lines(map_data.name, checks):
        click.echo(line)


@terrain.command(help="Render a saved result over its map as SVG")
@click.argument("map_path", type=click.Path(path_type=Path))
@click.argument("result_path", type=click.Path(path_type=Path))
@click.argument("svg_path", type=click.Path(path_type=Path))
@cli_errors
def render(map_path: Path, result_path: Path, svg_path: Path):
    map_data = load_map_file(map_path)
    result = _load_result(result_path)
    save_svg(result, map_data, svg_path, tile_px=get_config().output.svg_tile_px)
    click.echo(f"wrote {svg_path}")


@terrain.command(help="Destroy an obstacle and re-analyze the opened area of a saved result")
@click.argument("map_path", type=click.Path(path_type=Path))
@click.argument("result_path", type=click.Path(path_type=Path))
@click.argument("obstacle_id")
@solver_options
@click.option("--json", "json_path", type=click.Path(path_type=Path), default=None,
              help="Write the updated result JSON")
@click.option("--svg", "svg_path", type=click.Path(path_type=Path), default=None, help="Write an SVG figure")
@cli_errors
def destroy(map_path: Path, result_path: Path, obstacle_id: str, objective: str,
            json_path: Optional[Path], svg_path: Optional[Path], **flags):
    config = build_config(**flags)
    map_data = load_map_file(map_path)
    result = _load_result(result_path)
    updated = merge_and_resolve(result, map_data, obstacle_id, config)

    if json_path is not None:
        _write_text(json_path, result_to_json(updated))
    if svg_path is not None:
        save_svg(updated, apply_obstacle_destruction(map_data, obstacle_id), svg_path,
                 tile_px=config.output.svg_tile_px)
    for line in build_run_report(updated).lines():
        click.echo(line)
    sys.exit(0 if updated.fully_feasible else 2)


@terrain.command("config", help="Print the effective configuration")
def show_config():
    print_config()


@terrain.command(help="Convert a map between the JSON and ASCII formats")
@click.argument("source", type=click.Path(path_type=Path))
@click.argument("target", type=click.Path(path_type=Path))
@click.option("--to", "target_format", type=click.Choice([f.value for f in MapFormat]), default=None,
              help="Target format (guessed from the target suffix when omitted)")
@cli_errors
def convert(source: Path, target: Path, target_format: Optional[str]):
    map_data = load_map_file(source)
    fmt = MapFormat(target_format) if target_format else format_for_path(target)
    try:
        target.write_bytes(save_map(map_data, fmt))
    except OSError as e:
        raise TerrainError(ErrorType.IO_ERROR, f"Cannot write {target}: {e.strerror}", details={"path": str(target)})
    click.echo(f"wrote {target} ({fmt.value})")


def _load_result(path: Path):
    try:
        return result_from_json(_read_text(path))
    except ValueError as e:
        raise TerrainError(ErrorType.MAP_PARSE_ERROR, f"Invalid result file {path}: {e}", details={"path": str(path)})


def _parse_seeds(text: str):
    """Parse '1,2,3' or '0-99' (inclusive) into a list of seeds."""
    seeds = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                low, high = part.split("-", 1)
                seeds.extend(range(int(low), int(high) + 1))
            else:
                seeds.append(int(part))
        return [validate_seed(seed) for seed in seeds]
    except ValueError:
        raise TerrainError(ErrorType.CONFIGURATION_ERROR, f"Cannot parse seeds {text!r}")


if __name__ == "__main__":
    terrain(prog_name="python app.py")
