"""
Map sources for the terrain analysis engine.

This package contains readers and writers for:
- the JSON map format
- the hand-authorable ASCII map format
and the destructible-obstacle edit applied before dynamic reanalysis.
"""

import logging
from pathlib import Path
from typing import Optional, Union

from data_sources.ascii_source import AsciiMapSource
from data_sources.base import MapFormat, MapSource
from data_sources.json_source import JsonMapSource
from data_sources.obstacles import apply_obstacle_destruction
from error_handler import ErrorType, TerrainError
from models.models import MapData

logger = logging.getLogger(__name__)

_SOURCES = {
    MapFormat.JSON: JsonMapSource,
    MapFormat.ASCII: AsciiMapSource,
}

_SUFFIXES = {
    ".json": MapFormat.JSON,
    ".txt": MapFormat.ASCII,
    ".map": MapFormat.ASCII,
    ".ascii": MapFormat.ASCII,
}


def get_source(map_format: Union[MapFormat, str]) -> MapSource:
    return _SOURCES[MapFormat(map_format)]()


def format_for_path(path: Union[str, Path]) -> MapFormat:
    """
    Guess the map format from a file suffix.

    Raises:
        TerrainError: FORMAT_UNSUPPORTED for unknown suffixes
    """
    suffix = Path(path).suffix.lower()
    if suffix not in _SUFFIXES:
        raise TerrainError(
            ErrorType.FORMAT_UNSUPPORTED,
            f"Cannot tell the map format of {path}; use .json, .txt, .map or .ascii",
            details={"path": str(path)}
        )
    return _SUFFIXES[suffix]


def load_map(content: Union[bytes, str], map_format: Union[MapFormat, str], name: str = "") -> MapData:
    """
    Load and validate a map from file content.

    Args:
        content: File content
        map_format: MapFormat or its name ("json", "ascii")
        name: Fallback map name

    Returns:
        Validated MapData

    Raises:
        TerrainError: On parse or validation errors
    """
    return get_source(map_format).load(content, name=name)


def load_map_file(path: Union[str, Path], map_format: Optional[MapFormat] = None) -> MapData:
    """
    Load and validate a map file.

    Raises:
        TerrainError: IO_ERROR if the file cannot be read, or parse/validation errors
    """
    path = Path(path)
    map_format = map_format or format_for_path(path)
    try:
        content = path.read_bytes()
    except OSError as e:
        raise TerrainError(ErrorType.IO_ERROR, f"Cannot read map file {path}: {e.strerror}",
                           details={"path": str(path)})
    return load_map(content, map_format, name=path.stem)


def save_map(map_data: MapData, map_format: Union[MapFormat, str]) -> bytes:
    return get_source(map_format).serialize(map_data)


__all__ = [
    'AsciiMapSource',
    'JsonMapSource',
    'MapFormat',
    'MapSource',
    'apply_obstacle_destruction',
    'format_for_path',
    'get_source',
    'load_map',
    'load_map_file',
    'save_map',
]
