"""
SVG rendering of analysis results.

Layers, bottom to top: terrain tiles (low, high and very high ground in
yellow, khaki and green, unbuildable ground in blue), zone contours in black,
resource cluster boxes (blue for a zone's only cluster, red when the zone
holds several), centroids as red dots linked to their members by orange lines,
and separations as red lines. Output is a pure function of the result and
the map.

Requirements addressed:
- Figures follow the colour conventions of the analysis
- Rendering is byte-identical across runs
"""

import logging
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence, Union

import drawsvg as draw

from error_handler import ErrorType, error_handler_decorator
from geometry.primitives import Point, Polygon, Segment
from models.models import AnalysisResult, ChokeKind, MapData

logger = logging.getLogger(__name__)

BACKGROUND = "#3c3c3c"
OBSTACLE = "#8d6e63"
UNBUILDABLE = "#4a90d9"
HEIGHT_COLORS = {0: "#f4e04d", 1: "#c3b091", 2: "#5fa55a", 3: "#2f6b3a"}
CONTOUR = "#000000"
SINGLE_CLUSTER_BOX = "#1f4fd1"
MULTI_CLUSTER_BOX = "#d62728"
CENTROID = "#d62728"
MEMBER_LINE = "#ff8c00"
SEPARATION = "#e00000"


def _ring_path(rings: Iterable[Sequence[Point]], scale: int) -> str:
    parts = []
    for ring in rings:
        coords = " L ".join(f"{float(p.x) * scale:g} {float(p.y) * scale:g}" for p in ring)
        parts.append(f"M {coords} Z")
    return " ".join(parts)


def _tile_color(map_data: MapData, x: int, y: int, obstacle_tiles) -> str:
    grid = map_data.grid
    if not grid.walkable[y, x]:
        return OBSTACLE if (x, y) in obstacle_tiles else BACKGROUND
    if not grid.buildable[y, x]:
        return UNBUILDABLE
    return HEIGHT_COLORS.get(int(grid.terrain_height[y, x]), HEIGHT_COLORS[3])


def _draw_tiles(d: draw.Drawing, map_data: MapData, scale: int) -> None:
    """Draw terrain as horizontal runs of equally coloured tiles."""
    obstacle_tiles = {tile for obstacle in map_data.obstacles for tile in obstacle.tiles}
    grid = map_data.grid
    for y in range(grid.height):
        x = 0
        while x < grid.width:
            color = _tile_color(map_data, x, y, obstacle_tiles)
            end = x + 1
            while end < grid.width and _tile_color(map_data, end, y, obstacle_tiles) == color:
                end += 1
            if color != BACKGROUND:
                d.append(draw.Rectangle(x * scale, y * scale, (end - x) * scale, scale, fill=color))
            x = end


def _draw_polygon(d: draw.Drawing, polygon: Polygon, scale: int, **style) -> None:
    d.append(draw.Path(d=_ring_path(polygon.rings, scale), fill="none", **style))


def _draw_segment(d: draw.Drawing, segment: Segment, scale: int, **style) -> None:
    d.append(draw.Line(
        float(segment.a.x) * scale, float(segment.a.y) * scale,
        float(segment.b.x) * scale, float(segment.b.y) * scale,
        **style,
    ))


def render_svg(result: AnalysisResult, map_data: MapData, tile_px: int = 12) -> str:
    """
    Render an analysis result over its map.

    Args:
        result: Analysis result
        map_data: Map that was analyzed
        tile_px: Size of one tile in pixels

    Returns:
        SVG document text
    """
    scale = tile_px
    width = map_data.grid.width * scale
    height = map_data.grid.height * scale
    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill=BACKGROUND))

    _draw_tiles(d, map_data, scale)

    for zone in result.zones:
        _draw_polygon(d, zone.contour, scale, stroke=CONTOUR, stroke_width=1.5)

    clusters_per_zone = Counter(cluster.zone_id for cluster in result.clusters)
    for cluster in result.clusters:
        min_x, min_y, max_x, max_y = cluster.bounding_box
        color = SINGLE_CLUSTER_BOX if clusters_per_zone[cluster.zone_id] == 1 else MULTI_CLUSTER_BOX
        d.append(draw.Rectangle(
            min_x * scale, min_y * scale, (max_x - min_x + 1) * scale, (max_y - min_y + 1) * scale,
            fill="none", stroke=color, stroke_width=2,
        ))
        cx, cy = float(cluster.centroid.x) * scale, float(cluster.centroid.y) * scale
        for member in cluster.members:
            d.append(draw.Line(cx, cy, (member.x + 0.5) * scale, (member.y + 0.5) * scale,
                               stroke=MEMBER_LINE, stroke_width=1))
        d.append(draw.Circle(cx, cy, max(2.0, scale / 4), fill=CENTROID))

    for choke in result.choke_points:
        if choke.kind is ChokeKind.SEPARATION:
            _draw_segment(d, choke.geometry, scale, stroke=SEPARATION, stroke_width=3)

    logger.debug(f"Rendered {map_data.name!r}: {len(result.regions)} regions at {tile_px}px per tile")
    return d.as_svg()


@error_handler_decorator(ErrorType.IO_ERROR)
def save_svg(result: AnalysisResult, map_data: MapData, path: Union[str, Path], tile_px: int = 12) -> Path:
    """Render and write an SVG file; returns the path written."""
    path = Path(path)
    path.write_text(render_svg(result, map_data, tile_px), encoding="utf-8")
    logger.info(f"Wrote SVG to {path}")
    return path
