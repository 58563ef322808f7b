"""
Data validation for maps and analysis parameters.

This module checks the structural invariants of a map before analysis:
- Grid shapes and tile values
- Buildable tiles are walkable, height levels are in range
- Resources, destructible obstacles and start locations are consistent

Every map validator raises ValidationError naming the first offending tile in
row-major order.

Requirements addressed:
- Invalid maps are rejected before analysis with the offending tile
- CLI parameters are checked before a run starts
"""

from typing import Iterable, Optional, Tuple

import numpy as np

from error_handler import ErrorType, TerrainError
from models.models import MAX_HEIGHT_LEVEL, MapData, Objective, TileGrid


class ValidationError(TerrainError):
    """Map or parameter validation failure."""

    def __init__(self, message: str, tile: Optional[Tuple[int, int]] = None):
        details = {"tile": tile} if tile is not None else {}
        super().__init__(ErrorType.MAP_VALIDATION_ERROR, message, details=details)


def _first_tile(mask: np.ndarray) -> Optional[Tuple[int, int]]:
    """First True tile of a [y, x] mask in row-major order, as (x, y)."""
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    y, x = hits[0]
    return (int(x), int(y))


def validate_grid(grid: TileGrid) -> None:
    """
    Validate the per-tile arrays of a grid.

    Args:
        grid: Grid to check

    Raises:
        ValidationError: On a shape mismatch or a tile violating an invariant
    """
    if grid.width < 1 or grid.height < 1:
        raise ValidationError(f"Grid dimensions must be positive, got {grid.width}x{grid.height}")

    shape = (grid.height, grid.width)
    for name in ("walkable", "buildable", "terrain_height"):
        array = getattr(grid, name)
        if array.shape != shape:
            raise ValidationError(
                f"{name} has {array.size} entries, expected {grid.width * grid.height}"
            )

    offender = _first_tile(grid.buildable & ~grid.walkable)
    if offender is not None:
        raise ValidationError(f"Tile {offender} is buildable but not walkable", tile=offender)

    offender = _first_tile(grid.walkable & ((grid.terrain_height < 0) | (grid.terrain_height > MAX_HEIGHT_LEVEL)))
    if offender is not None:
        raise ValidationError(
            f"Tile {offender} has height level {int(grid.terrain_height[offender[1], offender[0]])}, "
            f"expected 0..{MAX_HEIGHT_LEVEL}",
            tile=offender
        )


def _check_in_bounds(grid: TileGrid, tiles: Iterable[Tuple[int, int]], what: str) -> None:
    for x, y in tiles:
        if not grid.in_bounds(x, y):
            raise ValidationError(f"{what} at {(x, y)} is outside the {grid.width}x{grid.height} grid", tile=(x, y))


def validate_resources(map_data: MapData) -> None:
    """
    Validate resources: in bounds, one per tile, on buildable ground, not
    under an obstacle, non-negative amounts.

    Raises:
        ValidationError: Naming the first offending resource tile
    """
    grid = map_data.grid
    seen = set()
    obstacle_tiles = {t for obstacle in map_data.obstacles for t in obstacle.tiles}
    for resource in sorted(map_data.resources, key=lambda r: (r.y, r.x)):
        tile = resource.position
        _check_in_bounds(grid, [tile], f"{resource.kind.value} resource")
        if tile in seen:
            raise ValidationError(f"Tile {tile} holds more than one resource", tile=tile)
        seen.add(tile)
        if resource.amount < 0:
            raise ValidationError(f"Resource at {tile} has a negative amount", tile=tile)
        if tile in obstacle_tiles:
            raise ValidationError(f"Resource at {tile} lies under an obstacle footprint", tile=tile)
        if not grid.buildable[tile[1], tile[0]]:
            raise ValidationError(f"Resource at {tile} is not on buildable ground", tile=tile)


def validate_obstacles(map_data: MapData) -> None:
    """
    Validate destructible obstacles: unique ids, positive hit points, non-empty
    footprints inside the grid, unwalkable and pairwise disjoint.

    Raises:
        ValidationError: Naming the first offending footprint tile
    """
    grid = map_data.grid
    ids = set()
    claimed = {}
    for obstacle in map_data.obstacles:
        if obstacle.id in ids:
            raise ValidationError(f"Duplicate obstacle id {obstacle.id!r}")
        ids.add(obstacle.id)
        if not obstacle.tiles:
            raise ValidationError(f"Obstacle {obstacle.id!r} has an empty footprint")
        if obstacle.hit_points <= 0:
            raise ValidationError(f"Obstacle {obstacle.id!r} must have positive hit points")
        _check_in_bounds(grid, obstacle.tiles, f"Obstacle {obstacle.id!r} tile")
        for tile in sorted(obstacle.tiles, key=lambda t: (t[1], t[0])):
            if grid.walkable[tile[1], tile[0]]:
                raise ValidationError(f"Obstacle {obstacle.id!r} covers walkable tile {tile}", tile=tile)
            if tile in claimed:
                raise ValidationError(
                    f"Tile {tile} belongs to obstacles {claimed[tile]!r} and {obstacle.id!r}", tile=tile
                )
            claimed[tile] = obstacle.id


def validate_start_locations(map_data: MapData) -> None:
    """
    Validate that every start location lies on a buildable tile.

    Raises:
        ValidationError: Naming the first offending start location
    """
    grid = map_data.grid
    for tile in map_data.start_locations:
        _check_in_bounds(grid, [tile], "Start location")
        if not grid.buildable[tile[1], tile[0]]:
            raise ValidationError(f"Start location {tile} is not buildable", tile=tile)


def validate_map(map_data: MapData) -> MapData:
    """
    Validate every structural invariant of a map.

    Args:
        map_data: Map to check

    Returns:
        The same map, for chaining

    Raises:
        ValidationError: On the first violated invariant
    """
    validate_grid(map_data.grid)
    validate_obstacles(map_data)
    validate_resources(map_data)
    validate_start_locations(map_data)
    return map_data


def validate_positive(value: float, name: str) -> float:
    """
    Validate a strictly positive parameter.

    Raises:
        ValidationError: If value <= 0
    """
    if value is None or value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}")
    return value


def validate_epsilon(epsilon: float) -> float:
    """Simplification tolerance: non-negative."""
    if epsilon is None or epsilon < 0:
        raise ValidationError(f"epsilon must be non-negative, got {epsilon}")
    return float(epsilon)


def validate_seed(seed: int) -> int:
    """Seeds are unsigned 64-bit integers."""
    if not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def validate_objective(objective) -> Objective:
    """
    Normalize an objective given as an Objective or its CLI name.

    Raises:
        ValidationError: If the name is unknown
    """
    if isinstance(objective, Objective):
        return objective
    try:
        return Objective(str(objective).strip().lower())
    except ValueError:
        valid = ", ".join(o.value for o in Objective)
        raise ValidationError(f"Unknown objective {objective!r}; expected one of {valid}")
