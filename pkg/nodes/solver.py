"""
Separation Solver Node for the terrain analysis engine.

This module solves the separation problem of one zone with a local search in
permutation mode: exactly n - 1 candidate separations are selected at any
time and moves swap one selected candidate for an unselected one. Candidate
assignments are compared lexicographically on (constraint error, objective),
so feasibility is never traded for a better objective.

When an attempt ends without a feasible assignment its time budget doubles
and the search is relaunched, up to the configured number of retries.

Requirements addressed:
- NoCrossings and MaxOneClusterPerRegion are error functions summed into the constraint error
- Objectives: total separation length or least-squares region area difference
- A seed fully determines the search in deterministic (iteration budget) mode
- An exhaustive solver serves as oracle on small instances
"""

import itertools
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tenacity import Retrying, retry_if_result, stop_after_attempt

from cache_manager import LRUCache
from config import SolverConfig
from error_handler import ErrorType, TerrainError
from geometry.chords import FaceSet
from logging_config import create_context_logger
from models.models import EfopModel, ErrorFunction, Objective, Solution

logger = logging.getLogger(__name__)

DEFAULT_BRUTE_FORCE_LIMIT = 200_000


# ============================================================================
# Assignments and error functions
# ============================================================================

class Assignment:
    """
    A set of selected candidate ids, with faces traced on demand.

    Faces are computed from the longest prefix (by ascending id) of selected
    separations that pairwise do not cross, so they are defined even when the
    assignment itself contains crossings.
    """

    def __init__(self, model: EfopModel, selected: Sequence[int]):
        self.model = model
        self.selected: Tuple[int, ...] = tuple(sorted(selected))

    @cached_property
    def kept(self) -> Tuple[int, ...]:
        kept: List[int] = []
        for cid in self.selected:
            partners = self.model.crossing_partners(cid)
            if any(other in partners for other in kept):
                break
            kept.append(cid)
        return tuple(kept)

    @cached_property
    def face_set(self) -> FaceSet:
        return self.model.arrangement.trace([self.model.candidate(cid).ref for cid in self.kept])

    @cached_property
    def cluster_faces(self) -> List[int]:
        """Face index of every cluster, in cluster order."""
        arrangement = self.model.arrangement
        faces = []
        for site, members in zip(self.model.cluster_sites, self.model.member_sites):
            face = arrangement.locate_site(self.face_set, site)
            if face is None:
                votes = Counter(
                    f for f in (arrangement.locate_site(self.face_set, m) for m in members) if f is not None
                )
                # majority of member tiles, ties to the lower face index
                face = min(votes, key=lambda f: (-votes[f], f)) if votes else 0
            faces.append(face)
        return faces

    @cached_property
    def cluster_counts(self) -> List[int]:
        counts = [0] * len(self.face_set.faces)
        for face in self.cluster_faces:
            counts[face] += 1
        return counts


def eval_f_cross(assignment: Assignment) -> int:
    """Number of unordered selected pairs whose segments properly cross."""
    selected = set(assignment.selected)
    total = sum(len(assignment.model.crossing_partners(cid) & selected) for cid in assignment.selected)
    return total // 2


def eval_f_clust(assignment: Assignment) -> int:
    """Highest cluster count of a region minus one, plus the number of regions without a cluster."""
    counts = assignment.cluster_counts
    return max(0, max(counts) - 1) + counts.count(0)


def eval_f_sep(assignment: Assignment) -> float:
    return math.fsum(assignment.model.candidate(cid).length for cid in assignment.selected)


def eval_f_areas(assignment: Assignment) -> float:
    areas = [Fraction(face.area2, 2) for face in assignment.face_set.faces]
    mean = sum(areas, Fraction(0)) / len(areas)
    return float(sum(((mean - area) ** 2 for area in areas), Fraction(0)))


def eval_objective(assignment: Assignment) -> float:
    """
    Objective value of an assignment under the model's objective.

    Returns:
        Total selected separation length, or the sum of squared differences
        between region areas and their mean
    """
    if assignment.model.objective is Objective.LEAST_SQUARES_AREAS:
        return eval_f_areas(assignment)
    return eval_f_sep(assignment)


class NoCrossings:
    """Error function: selected separations must not cross."""

    name = "f_cross"

    def __call__(self, assignment: Assignment) -> int:
        return eval_f_cross(assignment)


class MaxOneClusterPerRegion:
    """Error function: every region holds exactly one resource cluster."""

    name = "f_clust"

    def __call__(self, assignment: Assignment) -> int:
        return eval_f_clust(assignment)


def default_constraints() -> Dict[str, ErrorFunction]:
    return {c.name: c for c in (NoCrossings(), MaxOneClusterPerRegion())}


# ============================================================================
# Evaluation
# ============================================================================

@dataclass(frozen=True)
class Evaluation:
    """Constraint errors and objective value of one assignment."""
    selected: Tuple[int, ...]
    errors: Dict[str, int] = field(hash=False)
    constraint_error: int
    objective_value: float

    @property
    def key(self) -> Tuple[int, float]:
        return (self.constraint_error, self.objective_value)

    @property
    def feasible(self) -> bool:
        return self.constraint_error == 0


def evaluate_assignment(assignment: Assignment) -> Evaluation:
    """Run every constraint of the model and the objective on an assignment."""
    errors = {name: int(fn(assignment)) for name, fn in assignment.model.constraints.items()}
    return Evaluation(
        selected=assignment.selected,
        errors=errors,
        constraint_error=sum(errors.values()),
        objective_value=eval_objective(assignment),
    )


class Evaluator:
    """Evaluates assignments of one model through an LRU cache."""

    def __init__(self, model: EfopModel, capacity: int = 50_000):
        self.model = model
        self.cache = LRUCache(capacity)

    def evaluate(self, selected: Sequence[int]) -> Evaluation:
        key = tuple(sorted(selected))
        return self.cache.get_or_compute(key, lambda: evaluate_assignment(Assignment(self.model, key)))

    def clust_error(self, selected: Sequence[int]) -> int:
        key = ("f_clust",) + tuple(sorted(selected))
        cached = self.cache.get(key)
        if cached is None:
            cached = eval_f_clust(Assignment(self.model, selected))
            self.cache.set(key, cached)
        return cached


# ============================================================================
# Local search
# ============================================================================

@dataclass
class _AttemptResult:
    best: Evaluation
    iterations: int
    restarts: int


class _LocalSearch:
    """One attempt of the permutation-mode local search."""

    def __init__(self, model: EfopModel, config: SolverConfig, evaluator: Evaluator, rng: np.random.Generator):
        self.model = model
        self.config = config
        self.evaluator = evaluator
        self.rng = rng
        self.k = model.variable_count
        self.m = model.required_selected

    def random_assignment(self) -> Tuple[int, ...]:
        picks = self.rng.choice(self.k, size=self.m, replace=False) + 1
        return tuple(sorted(int(cid) for cid in picks))

    def contributions(self, current: Evaluation) -> List[int]:
        """Error attributable to each selected candidate, in selected order."""
        selected = set(current.selected)
        clust_now = current.errors.get("f_clust", 0)
        values = []
        for cid in current.selected:
            crossings = len(self.model.crossing_partners(cid) & selected)
            reduced = [other for other in current.selected if other != cid]
            values.append(crossings + clust_now - self.evaluator.clust_error(reduced))
        return values

    def pick_worst(self, current: Evaluation) -> int:
        values = self.contributions(current)
        top = max(values)
        ties = [cid for cid, value in zip(current.selected, values) if value == top]
        return ties[int(self.rng.integers(len(ties)))] if len(ties) > 1 else ties[0]

    def neighbours(self, current: Evaluation) -> List[int]:
        selected = set(current.selected)
        pool = np.array([cid for cid in range(1, self.k + 1) if cid not in selected])
        size = min(len(pool), self.config.neighborhood_sample_size)
        return [int(cid) for cid in self.rng.choice(pool, size=size, replace=False)]

    def run(self, max_iterations: Optional[int], deadline: Optional[float]) -> _AttemptResult:
        current = self.evaluator.evaluate(self.random_assignment())
        best = current
        iterations = restarts = stall = 0

        if self.k == self.m:
            return _AttemptResult(best=best, iterations=0, restarts=0)

        while True:
            if max_iterations is not None and iterations >= max_iterations:
                break
            if deadline is not None and time.perf_counter() >= deadline:
                break
            iterations += 1

            worst = self.pick_worst(current)
            kept = [cid for cid in current.selected if cid != worst]
            moves = [self.evaluator.evaluate(kept + [cid]) for cid in self.neighbours(current)]
            chosen = min(moves, key=lambda e: e.key)

            if chosen.key < current.key:
                current = chosen
            elif self.rng.random() < self.config.plateau_walk_probability:
                level = [e for e in moves if e.constraint_error == current.constraint_error]
                if level:
                    current = level[int(self.rng.integers(len(level)))]

            # stall counts iterations since the best assignment last improved
            if current.key < best.key:
                best = current
                stall = 0
            else:
                stall += 1

            if stall >= self.config.stall_restart_iterations:
                current = self.evaluator.evaluate(self.random_assignment())
                restarts += 1
                stall = 0
                if current.key < best.key:
                    best = current

        return _AttemptResult(best=best, iterations=iterations, restarts=restarts)


def attempt_budget_ms(model: EfopModel, config: SolverConfig, attempt: int) -> float:
    """Time budget of an attempt: n clusters x base timeout, doubled per relaunch."""
    return model.n_clusters * config.base_timeout_ms_per_cluster * 2 ** (attempt - 1)


def attempt_iterations(budget_ms: float, config: SolverConfig) -> int:
    return max(1, math.ceil(budget_ms / 100.0 * config.iterations_per_100ms))


def solve(model: EfopModel, config: Optional[SolverConfig] = None) -> Solution:
    """
    Solve a zone's separation model by local search with timeout doubling.

    Args:
        model: EfopModel with at least n - 1 candidates
        config: Solver configuration (environment defaults when omitted)

    Returns:
        Best Solution found over all attempts; feasible iff its constraint
        error is zero
    """
    config = config or SolverConfig()
    zlog = create_context_logger(__name__, zone=model.zone_id, clusters=model.n_clusters)
    if model.variable_count < model.required_selected:
        raise TerrainError(
            ErrorType.MODEL_TOO_SMALL,
            f"Zone {model.zone_id} has {model.variable_count} candidates, {model.required_selected} needed",
            details={"zone": model.zone_id},
            recoverable=True,
        )

    evaluator = Evaluator(model, capacity=config.cache_capacity)
    started = time.perf_counter()
    outcomes: List[_AttemptResult] = []
    retryer = Retrying(
        stop=stop_after_attempt(config.max_retries_with_doubling + 1),
        retry=retry_if_result(lambda result: not result.best.feasible),
        retry_error_callback=lambda state: state.outcome.result(),
        before_sleep=lambda state: zlog.warning(
            f"No feasible assignment after attempt {state.attempt_number}; doubling the budget"
        ),
    )

    for attempt in retryer:
        with attempt:
            number = attempt.retry_state.attempt_number
            budget_ms = attempt_budget_ms(model, config, number)
            search = _LocalSearch(model, config, evaluator, np.random.default_rng([config.seed, number]))
            if config.deterministic:
                outcome = search.run(max_iterations=attempt_iterations(budget_ms, config), deadline=None)
            else:
                outcome = search.run(max_iterations=None, deadline=time.perf_counter() + budget_ms / 1000.0)
            outcomes.append(outcome)
            zlog.debug(
                f"Attempt {number}: budget {budget_ms:.0f} ms, {outcome.iterations} iterations, "
                f"best error {outcome.best.constraint_error}"
            )
        if not attempt.retry_state.outcome.failed:
            attempt.retry_state.set_result(outcome)

    best = min((o.best for o in outcomes), key=lambda e: e.key)
    solution = Solution(
        zone_id=model.zone_id,
        selected=best.selected,
        constraint_error=best.constraint_error,
        objective_value=best.objective_value,
        feasible=best.feasible,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        retries_used=len(outcomes) - 1,
        iterations=sum(o.iterations for o in outcomes),
        restarts=sum(o.restarts for o in outcomes),
        candidate_count=model.variable_count,
        cache_hit_rate=evaluator.cache.hit_rate,
        errors=dict(best.errors),
    )
    stats = evaluator.cache.get_stats()
    if solution.feasible:
        zlog.info(
            f"Solved with {list(solution.selected)} (objective {solution.objective_value:.3f}, "
            f"{solution.iterations} iterations, cache hit rate {stats['hit_rate']}%)"
        )
    else:
        zlog.warning(
            f"Infeasible after {solution.retries_used} retries (error {solution.errors}, "
            f"cache hit rate {stats['hit_rate']}%)"
        )
    return solution


# ============================================================================
# Exhaustive oracle
# ============================================================================

def brute_force_solve(model: EfopModel, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> Solution:
    """
    Enumerate every (n - 1)-subset of candidates and keep the best.

    Subsets are visited in lexicographic order and the first best wins, so the
    result is deterministic. An infeasible instance reports the assignment of
    least constraint error.

    Args:
        model: EfopModel
        limit: Largest number of subsets enumerated

    Returns:
        Optimal Solution

    Raises:
        TerrainError: INSTANCE_TOO_LARGE when C(k, n - 1) exceeds limit
    """
    subsets = math.comb(model.variable_count, model.required_selected)
    if subsets > limit:
        raise TerrainError(
            ErrorType.INSTANCE_TOO_LARGE,
            f"Zone {model.zone_id} has {subsets} assignments, more than the limit of {limit}",
            details={"zone": model.zone_id, "subsets": subsets, "limit": limit},
        )

    started = time.perf_counter()
    best: Optional[Evaluation] = None
    for selected in itertools.combinations(range(1, model.variable_count + 1), model.required_selected):
        evaluation = evaluate_assignment(Assignment(model, selected))
        if best is None or evaluation.key < best.key:
            best = evaluation

    logger.debug(f"Zone {model.zone_id}: enumerated {subsets} assignments, best {best.key}")
    return Solution(
        zone_id=model.zone_id,
        selected=best.selected,
        constraint_error=best.constraint_error,
        objective_value=best.objective_value,
        feasible=best.feasible,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        iterations=subsets,
        candidate_count=model.variable_count,
        errors=dict(best.errors),
    )
