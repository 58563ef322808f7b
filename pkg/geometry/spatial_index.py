"""
Bounding-box index over segments, backed by rtree.

Boxes are stored as floats, widened by a small margin so that exact rational
coordinates never fall just outside a float box. Query results are candidate
ids only; callers confirm hits with the exact predicates.
"""

import logging
from typing import Iterable, List

from rtree import index

from geometry.primitives import BBox

logger = logging.getLogger(__name__)

BOX_MARGIN = 1e-9


def _float_box(box: BBox) -> tuple:
    min_x, min_y, max_x, max_y = box
    return (
        float(min_x) - BOX_MARGIN,
        float(min_y) - BOX_MARGIN,
        float(max_x) + BOX_MARGIN,
        float(max_y) + BOX_MARGIN,
    )


class SpatialIndex:
    """R-tree keyed by integer ids."""

    def __init__(self):
        self._backend = index.Index()
        self._size = 0

    def insert(self, item_id: int, box: BBox) -> None:
        self._backend.insert(item_id, _float_box(box))
        self._size += 1

    def query(self, box: BBox) -> List[int]:
        """Ids whose boxes overlap the given box, sorted."""
        return sorted(self._backend.intersection(_float_box(box)))

    def __len__(self) -> int:
        return self._size

    @classmethod
    def from_boxes(cls, boxes: Iterable[BBox]) -> "SpatialIndex":
        """
        Build an index whose ids are the positions in the given sequence.

        Args:
            boxes: Bounding boxes in id order

        Returns:
            Populated SpatialIndex
        """
        spatial = cls()
        for item_id, box in enumerate(boxes):
            spatial.insert(item_id, box)
        logger.debug(f"Indexed {len(spatial)} boxes")
        return spatial
