"""
LangGraph Workflow for the terrain analysis engine.

This module defines the LangGraph state machine that runs the analysis
pipeline on a map:

    label -> zoning -> clustering -> solve -> regions -> END
                                  \\-------/

The solve stage is skipped when no zone holds two clusters or more. The same
graph, restricted to the components touched by a destroyed obstacle, performs
the local re-analysis of merge_and_resolve.

Requirements addressed:
- Full pipeline from walkable components to regions, choke points and adjacency
- A zone that cannot be split yields a diagnostic, never a crash
- Re-analysis after obstacle destruction leaves unaffected regions untouched
"""

import logging
from functools import lru_cache
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from langgraph.graph import END, StateGraph

from config import AppConfig, get_config
from data_sources.obstacles import apply_obstacle_destruction
from error_handler import ErrorType, TerrainError, handle_error
from logging_config import create_performance_logger
from models.models import (
    AnalysisResult,
    AnalysisState,
    MapData,
    Objective,
    RunReport,
    ZoneClassification,
)
from nodes.labeling import label_components
from nodes.region_builder import build_regions, region_adjacency
from nodes.separation_model import build_model
from nodes.solver import solve
from nodes.zoning import classify_zone, cluster_resources, contour_unbuildable_zones, split_into_zones, zone_adjacency
from validators import validate_objective

logger = logging.getLogger(__name__)

STAGES = ("labeling", "zoning", "clustering", "solving", "regions")
ID_KINDS = ("zone", "cluster", "region", "choke")


# Node Functions

def _fail(state: AnalysisState, stage: str, error: Exception) -> AnalysisState:
    error_info = handle_error(error, context={"stage": stage}, default_error_type=ErrorType.NODE_ERROR)
    state["error"] = f"{stage}: {error_info['error_message']}"
    return state


def label_node(state: AnalysisState) -> AnalysisState:
    """
    Label walkable components and trace their contours.

    With a restriction mask only the components meeting the mask are kept.
    """
    perf = state["perf"]
    perf.start("labeling")
    try:
        labeled, components = label_components(state["map"].grid)
        mask = state.get("restrict_mask")
        if mask is not None:
            wanted = set(np.unique(labeled.labels[mask]).tolist()) - {0}
            components = [c for c in components if c.id in wanted]
        state["labeled"] = labeled
        state["components"] = components
        logger.info(f"Label Node: {len(components)} components")
    except Exception as e:
        state = _fail(state, "labeling", e)
    perf.end("labeling")
    return state


def zoning_node(state: AnalysisState) -> AnalysisState:
    """Split components into zones and build the zone grid."""
    perf = state["perf"]
    perf.start("zoning")
    try:
        map_data: MapData = state["map"]
        config: AppConfig = state["config"]
        resource_tiles = map_data.resource_tiles()
        next_id = state["id_offsets"]["zone"] + 1
        zones = []
        for component in state["components"]:
            found = split_into_zones(
                component,
                map_data.grid,
                state["labeled"],
                first_zone_id=next_id,
                epsilon=config.geometry.epsilon,
                resource_tiles=resource_tiles,
            )
            zones.extend(found)
            next_id += len(found)

        zone_grid = np.zeros((map_data.grid.height, map_data.grid.width), dtype=np.int32)
        for zone in zones:
            xs, ys = zip(*zone.tiles)
            zone_grid[list(ys), list(xs)] = zone.id
        neighbors = zone_adjacency(zones, zone_grid)
        for zone in zones:
            zone.neighbors = neighbors[zone.id]

        state["zones"] = zones
        state["zone_grid"] = zone_grid
        logger.info(
            f"Zoning Node: {len(zones)} zones, {len(contour_unbuildable_zones(zones))} unbuildable"
        )
    except Exception as e:
        state = _fail(state, "zoning", e)
    perf.end("zoning")
    return state


def clustering_node(state: AnalysisState) -> AnalysisState:
    """Cluster the resources of every buildable zone and classify zones."""
    perf = state["perf"]
    perf.start("clustering")
    try:
        map_data: MapData = state["map"]
        threshold = state["config"].zoning.cluster_threshold
        zones = state["zones"]
        by_id = {zone.id: zone for zone in zones}
        next_id = state["id_offsets"]["cluster"] + 1
        clusters = []
        for zone in zones:
            if zone.buildable:
                zone.clusters = cluster_resources(zone, map_data.resources, threshold, first_cluster_id=next_id)
                clusters.extend(zone.clusters)
                next_id += len(zone.clusters)
        for zone in zones:
            zone.classification = classify_zone(zone, [by_id[n] for n in zone.neighbors])

        state["clusters"] = clusters
        splits = sum(1 for z in zones if z.classification is ZoneClassification.NEEDS_SPLIT)
        logger.info(f"Clustering Node: {len(clusters)} clusters, {splits} zones to split")
    except Exception as e:
        state = _fail(state, "clustering", e)
    perf.end("clustering")
    return state


def solve_node(state: AnalysisState) -> AnalysisState:
    """
    Build and solve the separation model of every zone that needs a split.

    Zones whose model is too small or whose search stays infeasible are
    reported in the diagnostics and exported unsplit.
    """
    perf = state["perf"]
    perf.start("solving")
    config: AppConfig = state["config"]
    models = {}
    solutions = {}
    diagnostics = list(state.get("diagnostics", []))
    for zone in state["zones"]:
        if zone.classification is not ZoneClassification.NEEDS_SPLIT:
            continue
        try:
            model = build_model(zone, state["objective"], state["map"], max_edge=config.geometry.max_edge)
            models[zone.id] = model
            solution = solve(model, config.solver)
            solutions[zone.id] = solution
            if not solution.feasible:
                raise TerrainError(
                    ErrorType.INFEASIBLE_AFTER_RETRIES,
                    f"Zone {zone.id} stayed infeasible after {solution.retries_used} retries "
                    f"(errors: {solution.errors})",
                    details={"zone": zone.id},
                    recoverable=True,
                )
        except Exception as e:
            error_info = handle_error(e, context={"stage": "solving", "zone": zone.id},
                                      default_error_type=ErrorType.NODE_ERROR)
            diagnostics.append({
                "zone": zone.id,
                "error_type": error_info["error_type"],
                "message": error_info["error_message"],
                "recoverable": error_info["recoverable"],
            })
    state["models"] = models
    state["solutions"] = solutions
    state["diagnostics"] = diagnostics
    perf.end("solving")
    logger.info(f"Solve Node: {len(solutions)} zones solved, {len(diagnostics)} diagnostics")
    return state


def regions_node(state: AnalysisState) -> AnalysisState:
    """Assemble regions, choke points and the region grid."""
    perf = state["perf"]
    perf.start("regions")
    try:
        regions, chokes, region_grid = build_regions(
            state["zones"],
            state.get("models", {}),
            state.get("solutions", {}),
            state["zone_grid"],
            first_region_id=state["id_offsets"]["region"] + 1,
            first_choke_id=state["id_offsets"]["choke"] + 1,
        )
        state["regions"] = regions
        state["choke_points"] = chokes
        state["region_grid"] = region_grid
    except Exception as e:
        state = _fail(state, "regions", e)
    perf.end("regions")
    return state


# Conditional Edge Functions

def should_continue(state: AnalysisState) -> Literal["continue", "end"]:
    if state.get("error"):
        logger.warning(f"Routing: stopping after error - {state['error']}")
        return "end"
    return "continue"


def should_solve(state: AnalysisState) -> Literal["solve", "regions", "end"]:
    """Skip the solve stage when no zone needs splitting."""
    if state.get("error"):
        return "end"
    if any(z.classification is ZoneClassification.NEEDS_SPLIT for z in state["zones"]):
        logger.info("Routing: Clustering -> Solve")
        return "solve"
    logger.info("Routing: Clustering -> Regions (nothing to split)")
    return "regions"


# Workflow Builder

def create_workflow() -> StateGraph:
    """
    Create and configure the LangGraph workflow.

    Returns:
        Configured StateGraph ready for compilation
    """
    workflow = StateGraph(AnalysisState)

    workflow.add_node("label", label_node)
    workflow.add_node("zoning", zoning_node)
    workflow.add_node("clustering", clustering_node)
    workflow.add_node("solve", solve_node)
    workflow.add_node("regions", regions_node)

    workflow.set_entry_point("label")
    workflow.add_conditional_edges("label", should_continue, {"continue": "zoning", "end": END})
    workflow.add_conditional_edges("zoning", should_continue, {"continue": "clustering", "end": END})
    workflow.add_conditional_edges(
        "clustering",
        should_solve,
        {"solve": "solve", "regions": "regions", "end": END}
    )
    workflow.add_edge("solve", "regions")
    workflow.add_edge("regions", END)
    return workflow


@lru_cache(maxsize=1)
def compile_workflow() -> Any:
    """
    Compile the workflow into an executable graph (once per process).

    Returns:
        Compiled workflow ready for execution
    """
    compiled = create_workflow().compile()
    logger.debug("LangGraph workflow compiled")
    return compiled


def run_pipeline(
    map_data: MapData,
    objective: Objective,
    config: AppConfig,
    restrict_mask: Optional[np.ndarray] = None,
    id_offsets: Optional[Dict[str, int]] = None
) -> AnalysisState:
    """
    Run the graph and return its final state.

    Raises:
        TerrainError: NODE_ERROR if a stage failed
    """
    perf = create_performance_logger(__name__)
    initial_state: AnalysisState = {
        "map": map_data,
        "objective": objective,
        "config": config,
        "restrict_mask": restrict_mask,
        "id_offsets": {**{kind: 0 for kind in ID_KINDS}, **(id_offsets or {})},
        "models": {},
        "solutions": {},
        "diagnostics": [],
        "perf": perf,
        "error": None,
    }
    logger.info(f"Running analysis of {map_data.name!r} ({objective.value})")
    final_state = compile_workflow().invoke(initial_state)
    if final_state.get("error"):
        raise TerrainError(ErrorType.NODE_ERROR, f"Analysis failed at {final_state['error']}",
                           details={"map": map_data.name})
    return final_state


def _stage_ms(state: AnalysisState) -> Dict[str, float]:
    durations = state["perf"].durations_ms
    return {stage: durations.get(stage, 0.0) for stage in STAGES}


def analyze(
    map_data: MapData,
    objective: Union[Objective, str] = Objective.MIN_SEPARATION_LENGTH,
    config: Optional[AppConfig] = None
) -> AnalysisResult:
    """
    Analyze a map into regions, choke points and a region graph.

    Args:
        map_data: Validated map
        objective: Objective of the separation problems
        config: Configuration (global configuration when omitted)

    Returns:
        AnalysisResult; zones that could not be split carry diagnostics

    Raises:
        TerrainError: NODE_ERROR if a pipeline stage failed
    """
    config = config or get_config()
    objective = validate_objective(objective)
    state = run_pipeline(map_data, objective, config)
    stage_ms = _stage_ms(state)
    deterministic = config.solver.deterministic

    regions = state["regions"]
    chokes = state["choke_points"]
    result = AnalysisResult(
        map_name=map_data.name,
        objective=objective,
        seed=config.solver.seed,
        width=map_data.grid.width,
        height=map_data.grid.height,
        regions=regions,
        choke_points=chokes,
        adjacency=region_adjacency(regions, chokes, state["region_grid"]),
        zones=state["zones"],
        clusters=state["clusters"],
        region_grid=state["region_grid"],
        solver_stats={
            zone_id: solution.stats(include_timing=not deterministic)
            for zone_id, solution in sorted(state["solutions"].items())
        },
        diagnostics=state["diagnostics"],
        stage_ms=stage_ms,
        total_wall_time_ms=sum(stage_ms.values()),
        deterministic=deterministic,
    )
    logger.info(
        f"Analysis of {map_data.name!r}: {len(regions)} regions, {len(chokes)} choke points, "
        f"{len(result.solver_stats)} zones solved in {result.total_wall_time_ms:.1f} ms"
    )
    return result


def merge_and_resolve(
    result: AnalysisResult,
    map_data: MapData,
    obstacle_id: str,
    config: Optional[AppConfig] = None
) -> AnalysisResult:
    """
    Re-analyze the part of a map opened by destroying an obstacle.

    Only the components containing the obstacle footprint are relabeled,
    re-zoned and re-solved; their old zones, clusters, regions and chokes are
    replaced by new ones with ids above every existing id. Everything else is
    kept as is.

    Args:
        result: Analysis of map_data
        map_data: Map holding the obstacle
        obstacle_id: Obstacle to destroy
        config: Configuration (global configuration when omitted)

    Returns:
        Updated AnalysisResult

    Raises:
        TerrainError: UNKNOWN_OBSTACLE if the map has no such obstacle
    """
    config = config or get_config()
    footprint = map_data.obstacle(str(obstacle_id))
    opened = apply_obstacle_destruction(map_data, obstacle_id)

    labeled, _ = label_components(opened.grid)
    touched = {labeled.label_at(x, y) for x, y in footprint.tiles} - {0}
    affected = np.isin(labeled.labels, sorted(touched))

    removed_regions = {int(r) for r in np.unique(result.region_grid[affected]) if r > 0}
    removed_zones = {region.parent_zone for region in result.regions if region.id in removed_regions}
    removed_regions |= {region.id for region in result.regions if region.parent_zone in removed_zones}

    offsets = {
        "zone": max((z.id for z in result.zones), default=0),
        "cluster": max((c.id for c in result.clusters), default=0),
        "region": max((r.id for r in result.regions), default=0),
        "choke": max((c.id for c in result.choke_points), default=0),
    }
    state = run_pipeline(opened, result.objective, config, restrict_mask=affected, id_offsets=offsets)
    deterministic = config.solver.deterministic

    region_grid = result.region_grid.copy()
    region_grid[np.isin(region_grid, sorted(removed_regions))] = 0
    fresh = state["region_grid"] > 0
    region_grid[fresh] = state["region_grid"][fresh]

    regions = [r for r in result.regions if r.id not in removed_regions] + state["regions"]
    chokes = [
        c for c in result.choke_points
        if not (set(c.joins) & removed_regions) and c.zone_id not in removed_zones
    ] + state["choke_points"]
    solver_stats = {z: s for z, s in result.solver_stats.items() if z not in removed_zones}
    solver_stats.update({
        zone_id: solution.stats(include_timing=not deterministic)
        for zone_id, solution in sorted(state["solutions"].items())
    })
    diagnostics: List[Dict[str, Any]] = [d for d in result.diagnostics if d.get("zone") not in removed_zones]
    diagnostics.extend(state["diagnostics"])
    stage_ms = _stage_ms(state)

    logger.info(
        f"Destroyed {obstacle_id!r}: replaced {len(removed_zones)} zones and {len(removed_regions)} regions "
        f"by {len(state['zones'])} zones and {len(state['regions'])} regions"
    )
    return AnalysisResult(
        map_name=result.map_name,
        objective=result.objective,
        seed=config.solver.seed,
        width=result.width,
        height=result.height,
        regions=regions,
        choke_points=chokes,
        adjacency=region_adjacency(regions, chokes, region_grid),
        zones=[z for z in result.zones if z.id not in removed_zones] + state["zones"],
        clusters=[c for c in result.clusters if c.zone_id not in removed_zones] + state["clusters"],
        region_grid=region_grid,
        solver_stats=solver_stats,
        diagnostics=diagnostics,
        stage_ms=stage_ms,
        total_wall_time_ms=sum(stage_ms.values()),
        deterministic=deterministic,
    )


def build_run_report(result: AnalysisResult) -> RunReport:
    """
    Summarize the timings and model sizes of a run.

    Args:
        result: Analysis result

    Returns:
        RunReport with per-stage timings and the mean candidate count
    """
    variables = [stats["variables"] for stats in result.solver_stats.values()]
    return RunReport(
        map_name=result.map_name,
        stage_ms=dict(result.stage_ms),
        mean_candidates=sum(variables) / len(variables) if variables else 0.0,
        zones_solved=len(variables),
        feasible=result.fully_feasible,
    )
