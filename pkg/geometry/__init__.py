"""
Exact planar geometry used by the terrain analysis pipeline.
"""

from geometry.chords import ChordArrangement, ChordRef, FaceSet, chord_stays_inside, split_by_chords
from geometry.primitives import (
    Coord,
    Location,
    Point,
    Polygon,
    Ring,
    Segment,
    make_point,
    point_in_polygon,
    polygon_area,
    polygons_share_boundary,
    ring_signed_area,
    segments_overlap,
    segments_properly_cross,
    tile_center,
)
from geometry.raster import rasterize_polygon, supercover_tiles
from geometry.simplify import simplify, simplify_polygon
from geometry.spatial_index import SpatialIndex

__all__ = [
    "ChordArrangement",
    "ChordRef",
    "Coord",
    "FaceSet",
    "Location",
    "Point",
    "Polygon",
    "Ring",
    "Segment",
    "SpatialIndex",
    "chord_stays_inside",
    "make_point",
    "point_in_polygon",
    "polygon_area",
    "polygons_share_boundary",
    "rasterize_polygon",
    "ring_signed_area",
    "segments_overlap",
    "segments_properly_cross",
    "simplify",
    "simplify_polygon",
    "split_by_chords",
    "supercover_tiles",
    "tile_center",
]
