"""
Destructible obstacle edits on a map.
"""

import logging

from error_handler import ErrorType, TerrainError
from models.models import MapData

logger = logging.getLogger(__name__)


def apply_obstacle_destruction(map_data: MapData, obstacle_id: str) -> MapData:
    """
    Remove an obstacle and open its footprint.

    Footprint tiles become walkable, buildable according to the obstacle's
    buildable_after flag, and keep the height level the map declares for them.

    Args:
        map_data: Map holding the obstacle
        obstacle_id: Identifier of the obstacle to destroy

    Returns:
        New MapData without the obstacle; the input is left untouched

    Raises:
        TerrainError: UNKNOWN_OBSTACLE if no obstacle has that id
    """
    obstacle = map_data.obstacle(str(obstacle_id))
    if obstacle is None:
        known = ", ".join(o.id for o in map_data.obstacles) or "none"
        raise TerrainError(
            ErrorType.UNKNOWN_OBSTACLE,
            f"No obstacle with id {obstacle_id!r} (known: {known})",
            details={"obstacle_id": str(obstacle_id)}
        )

    grid = map_data.grid.copy()
    for x, y in obstacle.tiles:
        grid.walkable[y, x] = True
        grid.buildable[y, x] = obstacle.buildable_after

    logger.info(f"Destroyed obstacle {obstacle.id!r}, opening {len(obstacle.tiles)} tiles")
    return MapData(
        name=map_data.name,
        grid=grid,
        resources=map_data.resources,
        obstacles=tuple(o for o in map_data.obstacles if o.id != obstacle.id),
        start_locations=map_data.start_locations,
    )
