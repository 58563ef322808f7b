"""
JSON map format.

Object with keys name, width, height, walkable, buildable, height_level
(row-major arrays), resources, obstacles and start_locations.
"""

import json
import logging

from pydantic import ValidationError as SchemaError

from data_sources.base import MapFormat, MapSource
from error_handler import ErrorType, TerrainError
from models.models import MapData
from models.schemas import MapFile, map_from_file, map_to_file

logger = logging.getLogger(__name__)


class JsonMapSource(MapSource):
    """Reads and writes the JSON map format."""

    format = MapFormat.JSON

    def parse(self, content: bytes, name: str = "") -> MapData:
        text = self.decode(content)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise TerrainError(
                ErrorType.MAP_PARSE_ERROR,
                f"Malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                details={"line": e.lineno, "column": e.colno}
            )
        if isinstance(raw, dict) and "name" not in raw and name:
            raw["name"] = name
        try:
            document = MapFile.model_validate(raw)
        except SchemaError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise TerrainError(
                ErrorType.MAP_PARSE_ERROR,
                f"Map JSON does not follow the schema at {location or '<root>'}: {first['msg']}",
                details={"location": location}
            )
        return map_from_file(document)

    def serialize(self, map_data: MapData) -> bytes:
        document = map_to_file(map_data)
        return (json.dumps(document.model_dump(mode="json"), indent=None, separators=(",", ":")) + "\n").encode("utf-8")
