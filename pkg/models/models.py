"""
Data models for the terrain analysis engine.

This module defines the core data structures used throughout the pipeline:
- TileGrid / MapData: the portable map representation
- LabeledGrid / Component / Zone / ResourceCluster: labeling and zoning output
- Separation / EfopModel / Solution: the separation problem of one zone
- Region / ChokePoint / AnalysisResult / RunReport: the final analysis
- AnalysisState: LangGraph state for workflow orchestration
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple, TypedDict, Union

import numpy as np

from geometry.chords import ChordArrangement, ChordRef
from geometry.primitives import BBox, Coord, Point, Polygon, Segment, segments_properly_cross
from geometry.spatial_index import SpatialIndex

Tile = Tuple[int, int]

MAX_HEIGHT_LEVEL = 3


@dataclass(frozen=True, eq=False)
class TileGrid:
    """
    Per-tile walkability, buildability and height of a map.

    Arrays are indexed [y, x] with (0, 0) the top-left tile.
    """
    width: int
    height: int
    walkable: np.ndarray
    buildable: np.ndarray
    terrain_height: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TileGrid):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.walkable, other.walkable)
            and np.array_equal(self.buildable, other.buildable)
            and np.array_equal(self.terrain_height, other.terrain_height)
        )

    __hash__ = None

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def tile_count(self) -> int:
        return self.width * self.height

    def copy(self) -> "TileGrid":
        return TileGrid(
            width=self.width,
            height=self.height,
            walkable=self.walkable.copy(),
            buildable=self.buildable.copy(),
            terrain_height=self.terrain_height.copy(),
        )

    @classmethod
    def filled(cls, width: int, height: int, walkable: bool = True,
               buildable: bool = True, level: int = 0) -> "TileGrid":
        """Uniform grid, mostly useful for tests and fixtures."""
        shape = (height, width)
        return cls(
            width=width,
            height=height,
            walkable=np.full(shape, walkable, dtype=bool),
            buildable=np.full(shape, buildable and walkable, dtype=bool),
            terrain_height=np.full(shape, level, dtype=np.int8),
        )


class ResourceKind(Enum):
    """Kinds of harvestable resources."""
    MINERAL = "mineral"
    GAS = "gas"


DEFAULT_AMOUNTS = {
    ResourceKind.MINERAL: 1500,
    ResourceKind.GAS: 2500,
}


@dataclass(frozen=True)
class Resource:
    """A mineral patch or gas geyser occupying one tile."""
    kind: ResourceKind
    x: int
    y: int
    amount: int

    @property
    def position(self) -> Tile:
        return (self.x, self.y)


@dataclass(frozen=True)
class DestructibleObstacle:
    """An obstacle whose footprint is unwalkable while it stands."""
    id: str
    tiles: Tuple[Tile, ...]
    hit_points: int
    buildable_after: bool = False


@dataclass(frozen=True)
class MapData:
    """A complete map: grid, resources, obstacles and start locations."""
    name: str
    grid: TileGrid
    resources: Tuple[Resource, ...] = ()
    obstacles: Tuple[DestructibleObstacle, ...] = ()
    start_locations: Tuple[Tile, ...] = ()

    def obstacle(self, obstacle_id: str) -> Optional[DestructibleObstacle]:
        for obstacle in self.obstacles:
            if obstacle.id == obstacle_id:
                return obstacle
        return None

    def resource_tiles(self) -> FrozenSet[Tile]:
        return frozenset(r.position for r in self.resources)


@dataclass(frozen=True, eq=False)
class LabeledGrid:
    """Per-tile component ids (0 for background)."""
    labels: np.ndarray
    component_count: int

    def label_at(self, x: int, y: int) -> int:
        return int(self.labels[y, x])


@dataclass(frozen=True)
class Component:
    """
    A connected set of tiles with its traced contours.

    Contours follow tile corners; the outer contour has the component on its
    left (positive shoelace area), holes run the other way.
    """
    id: int
    outer_contour: Tuple[Point, ...]
    inner_contours: Tuple[Tuple[Point, ...], ...]
    tile_count: int
    tile_bbox: Tuple[int, int, int, int]  # (min_x, min_y, max_x, max_y), inclusive

    @property
    def polygon(self) -> Polygon:
        return Polygon(outer=self.outer_contour, holes=self.inner_contours)


@dataclass(frozen=True)
class ResourceCluster:
    """
    A group of resources found by single-linkage clustering.

    The centroid is the exact mean of member tile centres; the anchor is the
    point used to locate the cluster in a region.
    """
    id: int
    zone_id: int
    members: Tuple[Resource, ...]
    centroid: Point
    anchor: Point

    @property
    def bounding_box(self) -> Tuple[int, int, int, int]:
        xs = [m.x for m in self.members]
        ys = [m.y for m in self.members]
        return (min(xs), min(ys), max(xs), max(ys))


class ZoneClassification(Enum):
    """What the pipeline does with a zone."""
    NEEDS_SPLIT = "needs_split"
    SINGLE_CLUSTER = "single_cluster"
    EXCEPTION_ISLAND = "exception_island"
    EXCEPTION_UNBUILDABLE_SURROUND = "exception_unbuildable_surround"
    EXCEPTION_NO_CLUSTER = "exception_no_cluster"


@dataclass
class Zone:
    """A maximal uniform (height, buildability) sub-area of a component."""
    id: int
    parent_component: int
    height_level: int
    buildable: bool
    tiles: FrozenSet[Tile]
    traced: Polygon
    contour: Polygon
    clusters: List[ResourceCluster] = field(default_factory=list)
    classification: Optional[ZoneClassification] = None
    neighbors: Tuple[int, ...] = ()

    @property
    def signature(self) -> Tuple[int, bool]:
        return (self.height_level, self.buildable)

    @property
    def tile_count(self) -> int:
        return len(self.tiles)


@dataclass(frozen=True)
class Separation:
    """
    A candidate chord between two vertices of a zone's enriched contour.

    ids are 1-based and follow the sorted order of endpoint pairs.
    """
    id: int
    a: Point
    b: Point
    ref: ChordRef
    length: float
    covered_tiles: Tuple[Tile, ...]

    @property
    def segment(self) -> Segment:
        return Segment(self.a, self.b)

    @property
    def bbox(self) -> BBox:
        return self.segment.bbox


class Objective(Enum):
    """Objective of the separation problem."""
    MIN_SEPARATION_LENGTH = "min-sep"
    LEAST_SQUARES_AREAS = "areas"


# An error function maps an assignment (selected ids plus lazily traced faces)
# to a non-negative integer; see nodes.solver.Assignment
ErrorFunction = Callable[[Any], int]


@dataclass
class EfopModel:
    """
    Variables, constraints and objective of one zone's separation problem.

    Every candidate is a 0/1 variable; exactly required_selected of them are
    selected at any time. The arrangement and sites support fast face
    evaluation; crossing partners are computed on demand.
    """
    zone_id: int
    candidates: List[Separation]
    n_clusters: int
    objective: Objective
    arrangement: ChordArrangement
    cluster_sites: List[int]
    member_sites: List[List[int]]
    constraints: Dict[str, ErrorFunction] = field(default_factory=dict)
    candidate_index: Optional[SpatialIndex] = None
    _partners: Dict[int, FrozenSet[int]] = field(default_factory=dict, repr=False)

    @property
    def required_selected(self) -> int:
        return self.n_clusters - 1

    @property
    def variable_count(self) -> int:
        return len(self.candidates)

    def candidate(self, candidate_id: int) -> Separation:
        return self.candidates[candidate_id - 1]

    def crossing_partners(self, candidate_id: int) -> FrozenSet[int]:
        """Ids of the candidates whose segments properly cross the given one."""
        if candidate_id not in self._partners:
            candidate = self.candidate(candidate_id)
            if self.candidate_index is not None:
                positions = self.candidate_index.query(candidate.bbox)
            else:
                positions = range(len(self.candidates))
            segment = candidate.segment
            self._partners[candidate_id] = frozenset(
                pos + 1 for pos in positions
                if pos + 1 != candidate_id and segments_properly_cross(segment, self.candidates[pos].segment)
            )
        return self._partners[candidate_id]


@dataclass
class Solution:
    """Best assignment found for one model, with search statistics."""
    zone_id: int
    selected: Tuple[int, ...]
    constraint_error: int
    objective_value: float
    feasible: bool
    wall_time_ms: float = 0.0
    retries_used: int = 0
    iterations: int = 0
    restarts: int = 0
    candidate_count: int = 0
    cache_hit_rate: float = 0.0
    errors: Dict[str, int] = field(default_factory=dict)

    def stats(self, include_timing: bool = True) -> Dict[str, Any]:
        """Per-zone statistics as exported in the result file."""
        data = {
            "zone": self.zone_id,
            "variables": self.candidate_count,
            "selected": list(self.selected),
            "feasible": self.feasible,
            "constraint_error": self.constraint_error,
            "objective_value": self.objective_value,
            "retries": self.retries_used,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "cache_hit_rate": round(self.cache_hit_rate, 4),
        }
        if include_timing:
            data["wall_time_ms"] = round(self.wall_time_ms, 3)
        return data


class RegionKind(Enum):
    """Kinds of exported regions."""
    STANDARD = "standard"
    ISLAND = "island"
    UNBUILDABLE_CHOKE_AREA = "unbuildable_choke_area"
    NO_CLUSTER_EXCEPTION = "no_cluster_exception"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Region:
    """A final region polygon."""
    id: int
    polygon: Polygon
    area: Coord
    cluster_id: Optional[int]
    kind: RegionKind
    parent_zone: int


class ChokeKind(Enum):
    """Geometry of a choke point."""
    SEPARATION = "separation"
    UNBUILDABLE_ZONE = "unbuildable_zone"


@dataclass(frozen=True)
class ChokePoint:
    """A choke point joining two regions."""
    id: int
    kind: ChokeKind
    geometry: Union[Segment, Polygon]
    joins: Tuple[int, int]
    zone_id: int


@dataclass(eq=False)
class AnalysisResult:
    """
    Output of one analysis run.

    Two results are equal when their serializations are identical; see
    models.schemas.
    """
    map_name: str
    objective: Objective
    seed: int
    width: int
    height: int
    regions: List[Region]
    choke_points: List[ChokePoint]
    adjacency: List[Tuple[int, int]]
    zones: List[Zone]
    clusters: List[ResourceCluster]
    region_grid: np.ndarray
    solver_stats: Dict[int, Dict[str, Any]] = field(default_factory=dict)
    diagnostics: List[Dict[str, Any]] = field(default_factory=list)
    stage_ms: Dict[str, float] = field(default_factory=dict)
    total_wall_time_ms: float = 0.0
    deterministic: bool = False

    def region(self, region_id: int) -> Optional[Region]:
        for region in self.regions:
            if region.id == region_id:
                return region
        return None

    def region_at(self, x: int, y: int) -> int:
        return int(self.region_grid[y, x])

    @property
    def fully_feasible(self) -> bool:
        return not self.diagnostics and all(stats.get("feasible", False) for stats in self.solver_stats.values())


@dataclass
class RunReport:
    """Per-stage timings and model sizes of one run."""
    map_name: str
    stage_ms: Dict[str, float]
    mean_candidates: float
    zones_solved: int
    feasible: bool

    @property
    def total_ms(self) -> float:
        return sum(self.stage_ms.values())

    def lines(self) -> List[str]:
        out = [f"map: {self.map_name}"]
        for stage, ms in self.stage_ms.items():
            out.append(f"  {stage:<14} {ms:10.2f} ms")
        out.append(f"  {'total':<14} {self.total_ms:10.2f} ms")
        out.append(f"  zones solved: {self.zones_solved}, mean variables: {self.mean_candidates:.1f}")
        out.append(f"  feasible: {'yes' if self.feasible else 'no'}")
        return out


class AnalysisState(TypedDict, total=False):
    """
    LangGraph state object that flows through the analysis workflow.

    Nodes read their inputs from the state and write their outputs back.
    """
    # Input map and parameters
    map: MapData
    objective: Objective
    config: Any

    # Restriction to part of the map (merge-and-resolve) and id offsets
    restrict_mask: Optional[np.ndarray]
    id_offsets: Dict[str, int]

    # Labeling
    labeled: LabeledGrid
    components: List[Component]

    # Zoning and clustering
    zones: List[Zone]
    zone_grid: np.ndarray
    clusters: List[ResourceCluster]

    # Solving
    models: Dict[int, EfopModel]
    solutions: Dict[int, Solution]

    # Output
    regions: List[Region]
    choke_points: List[ChokePoint]
    region_grid: np.ndarray
    diagnostics: List[Dict[str, Any]]
    perf: Any

    # Error information if a node fails
    error: Optional[str]
