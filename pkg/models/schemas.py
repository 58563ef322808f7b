"""
File schemas for maps and analysis results.

Pydantic models describe the JSON map format and the result file; the
converters below translate between them and the in-memory models.
Coordinates are written as integers when integral and as decimals otherwise,
and are read back as exact fractions of their decimal text, so that
dump(load(dump(result))) == dump(result) byte for byte.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from geometry.primitives import Coord, Point, Polygon, Segment, normalize, parse_coord
from validators import ValidationError
from models.models import (
    AnalysisResult,
    ChokeKind,
    ChokePoint,
    DestructibleObstacle,
    MapData,
    Objective,
    Region,
    RegionKind,
    Resource,
    ResourceCluster,
    ResourceKind,
    TileGrid,
    Zone,
    ZoneClassification,
)

Number = Union[int, float]


# ---------------------------------------------------------------------------
# Map file
# ---------------------------------------------------------------------------

class TileRef(BaseModel):
    """A tile coordinate."""
    x: int = Field(description="Column, 0 at the left edge")
    y: int = Field(description="Row, 0 at the top edge")


class ResourceEntry(BaseModel):
    """A resource on one tile."""
    kind: ResourceKind = Field(description="mineral or gas")
    x: int
    y: int
    amount: int = Field(ge=0, description="Remaining amount; does not affect analysis")


class ObstacleEntry(BaseModel):
    """A destructible obstacle."""
    id: str = Field(description="Obstacle identifier")
    tiles: List[TileRef] = Field(min_length=1, description="Footprint tiles")
    hit_points: int = Field(gt=0)
    buildable_after: bool = Field(default=False, description="Footprint buildability once destroyed")

    @field_validator("id", mode="before")
    @classmethod
    def _id_as_text(cls, value: Any) -> str:
        return str(value)


class MapFile(BaseModel):
    """JSON map format; per-tile arrays are row-major, y increasing downward."""
    model_config = ConfigDict(extra="forbid")

    name: str = Field(description="Map name")
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    walkable: List[int] = Field(description="Row-major 0/1")
    buildable: List[int] = Field(description="Row-major 0/1")
    height_level: List[int] = Field(description="Row-major height levels 0-3")
    resources: List[ResourceEntry] = Field(default_factory=list)
    obstacles: List[ObstacleEntry] = Field(default_factory=list)
    start_locations: List[TileRef] = Field(default_factory=list)


def _grid_array(values: List[int], width: int, height: int, name: str, dtype) -> np.ndarray:
    if len(values) != width * height:
        raise ValidationError(f"{name} has {len(values)} entries, expected {width * height}")
    array = np.asarray(values, dtype=np.int64).reshape(height, width)
    if dtype is bool:
        bad = np.argwhere((array != 0) & (array != 1))
        if len(bad):
            y, x = bad[0]
            raise ValidationError(f"{name} at {(int(x), int(y))} must be 0 or 1", tile=(int(x), int(y)))
        return array.astype(bool)
    return array.astype(dtype)


def map_from_file(doc: MapFile) -> MapData:
    """
    Convert a parsed map file into MapData (not yet validated).

    Args:
        doc: Parsed JSON map

    Returns:
        MapData
    """
    grid = TileGrid(
        width=doc.width,
        height=doc.height,
        walkable=_grid_array(doc.walkable, doc.width, doc.height, "walkable", bool),
        buildable=_grid_array(doc.buildable, doc.width, doc.height, "buildable", bool),
        terrain_height=_grid_array(doc.height_level, doc.width, doc.height, "height_level", np.int8),
    )
    return MapData(
        name=doc.name,
        grid=grid,
        resources=tuple(Resource(r.kind, r.x, r.y, r.amount) for r in doc.resources),
        obstacles=tuple(
            DestructibleObstacle(
                id=o.id,
                tiles=tuple((t.x, t.y) for t in o.tiles),
                hit_points=o.hit_points,
                buildable_after=o.buildable_after,
            )
            for o in doc.obstacles
        ),
        start_locations=tuple((s.x, s.y) for s in doc.start_locations),
    )


def map_to_file(map_data: MapData) -> MapFile:
    grid = map_data.grid
    return MapFile(
        name=map_data.name,
        width=grid.width,
        height=grid.height,
        walkable=[int(v) for v in grid.walkable.ravel()],
        buildable=[int(v) for v in grid.buildable.ravel()],
        height_level=[int(v) for v in grid.terrain_height.ravel()],
        resources=[ResourceEntry(kind=r.kind, x=r.x, y=r.y, amount=r.amount) for r in map_data.resources],
        obstacles=[
            ObstacleEntry(
                id=o.id,
                tiles=[TileRef(x=x, y=y) for x, y in o.tiles],
                hit_points=o.hit_points,
                buildable_after=o.buildable_after,
            )
            for o in map_data.obstacles
        ],
        start_locations=[TileRef(x=x, y=y) for x, y in map_data.start_locations],
    )


# ---------------------------------------------------------------------------
# Result file
# ---------------------------------------------------------------------------

class PolygonEntry(BaseModel):
    outer: List[Tuple[Number, Number]]
    holes: List[List[Tuple[Number, Number]]] = Field(default_factory=list)


class RegionEntry(BaseModel):
    id: int
    kind: RegionKind
    cluster_id: Optional[int] = None
    parent_zone: int
    area: Number = Field(description="Area in square tiles")
    polygon: PolygonEntry


class ChokeEntry(BaseModel):
    id: int
    kind: ChokeKind
    zone: int
    joins: Tuple[int, int]
    segment: Optional[List[Tuple[Number, Number]]] = None
    polygon: Optional[PolygonEntry] = None


class ZoneEntry(BaseModel):
    id: int
    component: int
    height: int
    buildable: bool
    classification: Optional[ZoneClassification] = None
    neighbors: List[int] = Field(default_factory=list)
    polygon: PolygonEntry


class ClusterEntry(BaseModel):
    id: int
    zone: int
    centroid: Tuple[Number, Number]
    anchor: Tuple[Number, Number]
    box: Tuple[int, int, int, int]
    members: List[ResourceEntry]


class ResultFile(BaseModel):
    """Analysis result file."""
    map: str
    objective: Objective
    seed: int
    width: int
    height: int
    deterministic: bool = False
    regions: List[RegionEntry]
    choke_points: List[ChokeEntry]
    adjacency: List[Tuple[int, int]]
    zones: List[ZoneEntry] = Field(default_factory=list)
    clusters: List[ClusterEntry] = Field(default_factory=list)
    region_grid: List[List[int]] = Field(default_factory=list)
    stats: Dict[str, Any] = Field(default_factory=dict)


def _num(value: Coord) -> Number:
    value = normalize(value)
    return float(value) if isinstance(value, Fraction) else value


def _pt(p: Point) -> Tuple[Number, Number]:
    return (_num(p.x), _num(p.y))


def _ring_out(ring) -> List[Tuple[Number, Number]]:
    return [_pt(p) for p in ring]


def _polygon_out(poly: Polygon) -> PolygonEntry:
    return PolygonEntry(outer=_ring_out(poly.outer), holes=[_ring_out(h) for h in poly.holes])


def _point_in(values) -> Point:
    return Point(parse_coord(values[0]), parse_coord(values[1]))


def _polygon_in(entry: PolygonEntry) -> Polygon:
    return Polygon(
        outer=tuple(_point_in(v) for v in entry.outer),
        holes=tuple(tuple(_point_in(v) for v in hole) for hole in entry.holes),
    )


def result_to_file(result: AnalysisResult) -> ResultFile:
    """Build the result document; timing fields are dropped in deterministic mode."""
    include_timing = not result.deterministic
    stats: Dict[str, Any] = {
        "zones": [result.solver_stats[z] for z in sorted(result.solver_stats)],
        "diagnostics": list(result.diagnostics),
    }
    solved = [s for s in stats["zones"] if s.get("variables") is not None]
    stats["mean_variables"] = (
        round(sum(s["variables"] for s in solved) / len(solved), 3) if solved else 0
    )
    if include_timing:
        stats["stage_ms"] = {k: round(v, 3) for k, v in result.stage_ms.items()}
        stats["total_wall_time_ms"] = round(result.total_wall_time_ms, 3)

    chokes = []
    for choke in result.choke_points:
        entry = ChokeEntry(id=choke.id, kind=choke.kind, zone=choke.zone_id, joins=choke.joins)
        if isinstance(choke.geometry, Segment):
            entry.segment = [_pt(choke.geometry.a), _pt(choke.geometry.b)]
        else:
            entry.polygon = _polygon_out(choke.geometry)
        chokes.append(entry)

    return ResultFile(
        map=result.map_name,
        objective=result.objective,
        seed=result.seed,
        width=result.width,
        height=result.height,
        deterministic=result.deterministic,
        regions=[
            RegionEntry(
                id=r.id,
                kind=r.kind,
                cluster_id=r.cluster_id,
                parent_zone=r.parent_zone,
                area=_num(r.area),
                polygon=_polygon_out(r.polygon),
            )
            for r in result.regions
        ],
        choke_points=chokes,
        adjacency=[tuple(pair) for pair in result.adjacency],
        zones=[
            ZoneEntry(
                id=z.id,
                component=z.parent_component,
                height=z.height_level,
                buildable=z.buildable,
                classification=z.classification,
                neighbors=list(z.neighbors),
                polygon=_polygon_out(z.contour),
            )
            for z in result.zones
        ],
        clusters=[
            ClusterEntry(
                id=c.id,
                zone=c.zone_id,
                centroid=_pt(c.centroid),
                anchor=_pt(c.anchor),
                box=c.bounding_box,
                members=[ResourceEntry(kind=m.kind, x=m.x, y=m.y, amount=m.amount) for m in c.members],
            )
            for c in result.clusters
        ],
        region_grid=result.region_grid.tolist(),
        stats=stats,
    )


def result_to_json(result: AnalysisResult) -> str:
    """
    Serialize a result to JSON text.

    Args:
        result: Analysis result

    Returns:
        JSON text ending with a newline
    """
    return result_to_file(result).model_dump_json(indent=2, exclude_none=True) + "\n"


def result_from_json(text: str) -> AnalysisResult:
    """
    Rebuild an AnalysisResult from its JSON serialization.

    Zone tile sets are recovered from the region grid.

    Args:
        text: JSON text produced by result_to_json

    Returns:
        AnalysisResult
    """
    doc = ResultFile.model_validate_json(text)
    region_grid = np.asarray(doc.region_grid, dtype=np.int32).reshape(doc.height, doc.width)

    zone_of_region = {r.id: r.parent_zone for r in doc.regions}
    zone_tiles: Dict[int, set] = {}
    for y, x in np.argwhere(region_grid > 0):
        zone_id = zone_of_region.get(int(region_grid[y, x]))
        if zone_id is not None:
            zone_tiles.setdefault(zone_id, set()).add((int(x), int(y)))

    clusters = [
        ResourceCluster(
            id=c.id,
            zone_id=c.zone,
            members=tuple(Resource(m.kind, m.x, m.y, m.amount) for m in c.members),
            centroid=_point_in(c.centroid),
            anchor=_point_in(c.anchor),
        )
        for c in doc.clusters
    ]
    zones = []
    for z in doc.zones:
        polygon = _polygon_in(z.polygon)
        zones.append(Zone(
            id=z.id,
            parent_component=z.component,
            height_level=z.height,
            buildable=z.buildable,
            tiles=frozenset(zone_tiles.get(z.id, ())),
            traced=polygon,
            contour=polygon,
            clusters=[c for c in clusters if c.zone_id == z.id],
            classification=z.classification,
            neighbors=tuple(z.neighbors),
        ))

    chokes = []
    for c in doc.choke_points:
        if c.segment is not None:
            geometry = Segment(_point_in(c.segment[0]), _point_in(c.segment[1]))
        else:
            geometry = _polygon_in(c.polygon)
        chokes.append(ChokePoint(id=c.id, kind=c.kind, geometry=geometry, joins=tuple(c.joins), zone_id=c.zone))

    stats = dict(doc.stats)
    return AnalysisResult(
        map_name=doc.map,
        objective=doc.objective,
        seed=doc.seed,
        width=doc.width,
        height=doc.height,
        regions=[
            Region(
                id=r.id,
                polygon=_polygon_in(r.polygon),
                area=parse_coord(r.area),
                cluster_id=r.cluster_id,
                kind=r.kind,
                parent_zone=r.parent_zone,
            )
            for r in doc.regions
        ],
        choke_points=chokes,
        adjacency=[tuple(pair) for pair in doc.adjacency],
        zones=zones,
        clusters=clusters,
        region_grid=region_grid,
        solver_stats={s["zone"]: s for s in stats.get("zones", [])},
        diagnostics=list(stats.get("diagnostics", [])),
        stage_ms=dict(stats.get("stage_ms", {})),
        total_wall_time_ms=float(stats.get("total_wall_time_ms", 0.0)),
        deterministic=doc.deterministic,
    )


def results_equal(left: AnalysisResult, right: AnalysisResult) -> bool:
    """Results are equal when they serialize identically."""
    return result_to_json(left) == result_to_json(right)
