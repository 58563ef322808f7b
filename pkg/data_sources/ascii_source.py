"""
Hand-authorable ASCII map format.

One character per tile, one line per row:

    #  unwalkable
    .  walkable, buildable, height 0
    :  walkable, buildable, height 1
    ;  walkable, buildable, height 2
    ^  walkable, buildable, height 3
    ,  walkable, unbuildable, height 0
    /  ramp: walkable, unbuildable, height 0
    m  mineral on buildable height-0 ground
    g  gas geyser on buildable height-0 ground
    D  destructible obstacle tile (4-connected runs form one obstacle)
    S  start location on buildable height-0 ground

An optional first line "name: <map name>" names the map.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from scipy import ndimage

from data_sources.base import MapFormat, MapSource
from error_handler import ErrorType, TerrainError
from models.models import DEFAULT_AMOUNTS, DestructibleObstacle, MapData, Resource, ResourceKind, TileGrid

logger = logging.getLogger(__name__)

# char -> (walkable, buildable, height)
TERRAIN_CHARS: Dict[str, Tuple[bool, bool, int]] = {
    "#": (False, False, 0),
    ".": (True, True, 0),
    ":": (True, True, 1),
    ";": (True, True, 2),
    "^": (True, True, 3),
    ",": (True, False, 0),
    "/": (True, False, 0),
    "m": (True, True, 0),
    "g": (True, True, 0),
    "S": (True, True, 0),
    "D": (False, False, 0),
}

BUILDABLE_BY_HEIGHT = {0: ".", 1: ":", 2: ";", 3: "^"}

NAME_PREFIX = "name:"
OBSTACLE_HIT_POINTS = 2000

FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


def _obstacle_ids(mask: np.ndarray) -> Tuple[np.ndarray, int]:
    """Label 4-connected obstacle runs, numbered in raster order of first tile."""
    labels, count = ndimage.label(mask, structure=FOUR_CONNECTED)
    return labels, count


class AsciiMapSource(MapSource):
    """Reads and writes the ASCII map format."""

    format = MapFormat.ASCII

    def parse(self, content: bytes, name: str = "") -> MapData:
        lines = self.decode(content).splitlines()
        if lines and lines[0].startswith(NAME_PREFIX):
            name = lines[0][len(NAME_PREFIX):].strip()
            lines = lines[1:]
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            raise TerrainError(ErrorType.MAP_PARSE_ERROR, "ASCII map has no rows")

        width = len(lines[0])
        height = len(lines)
        for row, line in enumerate(lines):
            if len(line) != width:
                raise TerrainError(
                    ErrorType.MAP_PARSE_ERROR,
                    f"Row {row} has {len(line)} characters, expected {width}",
                    details={"row": row}
                )

        walkable = np.zeros((height, width), dtype=bool)
        buildable = np.zeros((height, width), dtype=bool)
        levels = np.zeros((height, width), dtype=np.int8)
        obstacle_mask = np.zeros((height, width), dtype=bool)
        resources: List[Resource] = []
        starts: List[Tuple[int, int]] = []

        for y, line in enumerate(lines):
            for x, char in enumerate(line):
                if char not in TERRAIN_CHARS:
                    raise TerrainError(
                        ErrorType.MAP_PARSE_ERROR,
                        f"Unknown map character {char!r} at {(x, y)}",
                        details={"tile": (x, y)}
                    )
                walkable[y, x], buildable[y, x], levels[y, x] = TERRAIN_CHARS[char]
                if char == "m":
                    resources.append(Resource(ResourceKind.MINERAL, x, y, DEFAULT_AMOUNTS[ResourceKind.MINERAL]))
                elif char == "g":
                    resources.append(Resource(ResourceKind.GAS, x, y, DEFAULT_AMOUNTS[ResourceKind.GAS]))
                elif char == "S":
                    starts.append((x, y))
                elif char == "D":
                    obstacle_mask[y, x] = True

        labels, count = _obstacle_ids(obstacle_mask)
        order = []
        for y, x in np.argwhere(labels > 0):
            label = int(labels[y, x])
            if label not in order:
                order.append(label)
        obstacles = []
        for number, label in enumerate(order, start=1):
            tiles = tuple((int(x), int(y)) for y, x in np.argwhere(labels == label))
            obstacles.append(DestructibleObstacle(
                id=f"D{number}", tiles=tiles, hit_points=OBSTACLE_HIT_POINTS, buildable_after=False
            ))

        grid = TileGrid(width=width, height=height, walkable=walkable, buildable=buildable, terrain_height=levels)
        logger.debug(f"Parsed ASCII map {name!r} with {count} obstacle runs")
        return MapData(
            name=name or "ascii-map",
            grid=grid,
            resources=tuple(resources),
            obstacles=tuple(obstacles),
            start_locations=tuple(starts),
        )

    def _unsupported(self, message: str, tile=None) -> TerrainError:
        return TerrainError(
            ErrorType.FORMAT_UNSUPPORTED,
            f"Map cannot be written as ASCII: {message}",
            details={"tile": tile} if tile is not None else {}
        )

    def serialize(self, map_data: MapData) -> bytes:
        grid = map_data.grid
        rows = [["#"] * grid.width for _ in range(grid.height)]

        for y in range(grid.height):
            for x in range(grid.width):
                if not grid.walkable[y, x]:
                    if grid.terrain_height[y, x] != 0:
                        raise self._unsupported("unwalkable tile with a height level", (x, y))
                    continue
                level = int(grid.terrain_height[y, x])
                if grid.buildable[y, x]:
                    rows[y][x] = BUILDABLE_BY_HEIGHT[level]
                elif level == 0:
                    rows[y][x] = ","
                else:
                    raise self._unsupported(f"unbuildable tile at height {level}", (x, y))

        expected = {
            resource_kind: char for resource_kind, char in ((ResourceKind.MINERAL, "m"), (ResourceKind.GAS, "g"))
        }
        for resource in sorted(map_data.resources, key=lambda r: (r.y, r.x)):
            if rows[resource.y][resource.x] != ".":
                raise self._unsupported("resource off buildable height-0 ground", resource.position)
            if resource.amount != DEFAULT_AMOUNTS[resource.kind]:
                raise self._unsupported("non-default resource amount", resource.position)
            rows[resource.y][resource.x] = expected[resource.kind]
        if list(map_data.resources) != sorted(map_data.resources, key=lambda r: (r.y, r.x)):
            raise self._unsupported("resources are not in row-major order")

        for x, y in map_data.start_locations:
            if rows[y][x] != ".":
                raise self._unsupported("start location off plain buildable height-0 ground", (x, y))
            rows[y][x] = "S"
        if list(map_data.start_locations) != sorted(map_data.start_locations, key=lambda t: (t[1], t[0])):
            raise self._unsupported("start locations are not in row-major order")

        for obstacle in map_data.obstacles:
            for x, y in obstacle.tiles:
                rows[y][x] = "D"
        if map_data.obstacles:
            reparsed = self.parse("\n".join("".join(r) for r in rows).encode("utf-8"))
            if reparsed.obstacles != tuple(map_data.obstacles):
                raise self._unsupported("obstacles are not plain 4-connected runs named D1, D2, ...")

        text = f"{NAME_PREFIX} {map_data.name}\n" + "\n".join("".join(r) for r in rows) + "\n"
        return text.encode("utf-8")
