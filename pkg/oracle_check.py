"""
Oracle check of the local-search solver against exhaustive enumeration.

For every zone of a map whose model is small enough to enumerate, the optimum
found by brute force is compared with the solutions of seeded solver runs.

Requirements addressed:
- Optimum-match rate and feasibility rate per tractable zone
- Zones over the enumeration limit are skipped, not failed
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Union

from config import AppConfig, get_config
from error_handler import ErrorType, TerrainError
from models.models import MapData, Objective, Solution
from nodes.solver import brute_force_solve, solve
from validators import validate_objective
from workflow import run_pipeline

logger = logging.getLogger(__name__)

# Relative tolerance when comparing float objective values
MATCH_TOLERANCE = 1e-9
NEAR_OPTIMAL_FACTOR = 1.10


def objectives_match(solution: Solution, optimum: Solution) -> bool:
    """A run matches when it agrees with the optimum on feasibility and, if feasible, on value."""
    if not optimum.feasible:
        return not solution.feasible
    if not solution.feasible:
        return False
    return abs(solution.objective_value - optimum.objective_value) <= MATCH_TOLERANCE * max(1.0, abs(optimum.objective_value))


def near_optimal(solution: Solution, optimum: Solution) -> bool:
    if not optimum.feasible:
        return not solution.feasible
    return solution.feasible and solution.objective_value <= optimum.objective_value * NEAR_OPTIMAL_FACTOR + MATCH_TOLERANCE


@dataclass
class ZoneCheck:
    """Outcome of checking one zone."""
    zone_id: int
    candidates: int
    n_clusters: int
    skipped: bool = False
    reason: str = ""
    optimum: Optional[float] = None
    oracle_feasible: Optional[bool] = None
    runs: int = 0
    matches: int = 0
    near_optimal: int = 0
    feasible_runs: int = 0
    objectives: List[float] = field(default_factory=list)

    @property
    def match_rate(self) -> float:
        return self.matches / self.runs if self.runs else 0.0

    @property
    def feasibility_rate(self) -> float:
        return self.feasible_runs / self.runs if self.runs else 0.0

    def line(self) -> str:
        head = f"zone {self.zone_id:>3} ({self.candidates} candidates, {self.n_clusters} clusters)"
        if self.skipped:
            return f"{head}: skipped ({self.reason})"
        optimum = f"{self.optimum:.3f}" if self.oracle_feasible else "infeasible"
        return (
            f"{head}: optimum {optimum}, match {self.matches}/{self.runs} "
            f"({self.match_rate:.0%}), within 10% {self.near_optimal}/{self.runs}, "
            f"feasible {self.feasible_runs}/{self.runs}"
        )


def check_map(
    map_data: MapData,
    seeds: Sequence[int],
    objective: Union[Objective, str] = Objective.MIN_SEPARATION_LENGTH,
    config: Optional[AppConfig] = None
) -> List[ZoneCheck]:
    """
    Compare solver runs with the exhaustive optimum on every tractable zone.

    Args:
        map_data: Validated map
        seeds: Solver seeds, one run per seed
        objective: Objective of the separation problems
        config: Configuration (global configuration when omitted)

    Returns:
        One ZoneCheck per zone that has a separation model, by zone id
    """
    config = config or get_config()
    objective = validate_objective(objective)
    state = run_pipeline(map_data, objective, config)

    checks = []
    for zone_id, model in sorted(state["models"].items()):
        check = ZoneCheck(zone_id=zone_id, candidates=model.variable_count, n_clusters=model.n_clusters)
        checks.append(check)
        try:
            optimum = brute_force_solve(model, limit=config.solver.brute_force_limit)
        except TerrainError as e:
            if e.error_type is not ErrorType.INSTANCE_TOO_LARGE:
                raise
            check.skipped = True
            check.reason = e.message
            logger.info(f"Oracle check skipped zone {zone_id}: {e.message}")
            continue

        check.optimum = optimum.objective_value
        check.oracle_feasible = optimum.feasible
        for seed in seeds:
            solution = solve(model, replace(config.solver, seed=seed))
            check.runs += 1
            check.matches += objectives_match(solution, optimum)
            check.near_optimal += near_optimal(solution, optimum)
            check.feasible_runs += solution.feasible
            check.objectives.append(solution.objective_value)
        logger.info(f"Oracle check zone {zone_id}: {check.matches}/{check.runs} optimal")
    return checks


def summary_lines(map_name: str, checks: Sequence[ZoneCheck]) -> List[str]:
    checked = [c for c in checks if not c.skipped]
    runs = sum(c.runs for c in checked)
    lines = [f"map: {map_name}"]
    lines.extend(f"  {c.line()}" for c in checks)
    if runs:
        lines.append(
            f"  overall: match rate {sum(c.matches for c in checked) / runs:.1%}, "
            f"feasibility rate {sum(c.feasible_runs for c in checked) / runs:.1%} "
            f"over {len(checked)} zones ({len(checks) - len(checked)} skipped)"
        )
    else:
        lines.append(f"  no tractable zone ({len(checks)} skipped)")
    return lines
