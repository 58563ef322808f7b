"""
Abstract base class for map sources.

This module defines the interface that every map format implements, so that
the pipeline reads JSON and ASCII maps the same way.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum

from error_handler import ErrorType, TerrainError
from models.models import MapData
from validators import validate_map

logger = logging.getLogger(__name__)


class MapFormat(Enum):
    """Supported map file formats."""
    JSON = "json"
    ASCII = "ascii"


class MapSource(ABC):
    """
    Abstract base class for map formats.

    Implementations parse raw file content into a MapData and serialize a
    MapData back; load() adds validation of every map invariant.
    """

    format: MapFormat

    def __init__(self):
        """Initialize the map source."""
        self.name = self.__class__.__name__

    @abstractmethod
    def parse(self, content: bytes, name: str = "") -> MapData:
        """
        Parse file content without validating map invariants.

        Args:
            content: Raw file bytes
            name: Fallback map name when the format carries none

        Returns:
            MapData

        Raises:
            TerrainError: MAP_PARSE_ERROR if the content does not follow the grammar
        """
        pass

    @abstractmethod
    def serialize(self, map_data: MapData) -> bytes:
        """
        Serialize a map in this format.

        Raises:
            TerrainError: FORMAT_UNSUPPORTED if the format cannot hold the map
        """
        pass

    def load(self, content: bytes, name: str = "") -> MapData:
        """
        Parse and validate a map.

        Args:
            content: Raw file bytes
            name: Fallback map name

        Returns:
            A MapData satisfying every invariant

        Raises:
            TerrainError: On parse or validation errors
        """
        if isinstance(content, str):
            content = content.encode("utf-8")
        map_data = self.parse(content, name=name)
        validate_map(map_data)
        logger.info(
            f"{self.name}: loaded {map_data.name!r} "
            f"({map_data.grid.width}x{map_data.grid.height}, "
            f"{len(map_data.resources)} resources, {len(map_data.obstacles)} obstacles)"
        )
        return map_data

    @staticmethod
    def decode(content: bytes) -> str:
        try:
            return content.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TerrainError(ErrorType.MAP_PARSE_ERROR, f"Map file is not UTF-8 text: {e}")
