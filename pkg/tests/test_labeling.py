"""
Unit tests for connectivity labeling.

The partition of walkable tiles into 8-connected components is compared with
scipy's flood-fill labeling on random grids.
"""

import unittest

import numpy as np
from scipy import ndimage

from geometry.primitives import Location, point_in_polygon, polygon_area, tile_center
from models.models import TileGrid
from nodes.labeling import label_components, label_mask, unbuildable_predicate
from tests.helpers import ascii_map

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


def _random_grid(rng: np.random.Generator, size: int = 32, density: float = 0.55) -> TileGrid:
    walkable = rng.random((size, size)) < density
    return TileGrid(
        width=size,
        height=size,
        walkable=walkable,
        buildable=walkable.copy(),
        terrain_height=np.zeros((size, size), dtype=np.int8),
    )


def _same_partition(ours: np.ndarray, oracle: np.ndarray) -> bool:
    """Label arrays describe the same partition up to renaming."""
    if not np.array_equal(ours > 0, oracle > 0):
        return False
    pairs = set(zip(ours[ours > 0].tolist(), oracle[oracle > 0].tolist()))
    return len(pairs) == len({a for a, _ in pairs}) == len({b for _, b in pairs})


class TestLabeling(unittest.TestCase):
    """Test cases for walkable component labeling."""

    def test_partition_matches_flood_fill(self):
        """Components equal scipy's 8-connected flood fill up to renaming."""
        rng = np.random.default_rng(2024)
        for _ in range(200):
            grid = _random_grid(rng)
            labeled, components = label_components(grid)
            oracle, count = ndimage.label(grid.walkable, structure=EIGHT_CONNECTED)
            self.assertEqual(labeled.component_count, count)
            self.assertEqual(len(components), count)
            self.assertTrue(_same_partition(labeled.labels, oracle))

    def test_tile_centres_inside_contours(self):
        """Every tile centre lies strictly inside its component polygon."""
        rng = np.random.default_rng(7)
        for _ in range(5):
            grid = _random_grid(rng, size=16)
            labeled, components = label_components(grid)
            for component in components:
                polygon = component.polygon
                ys, xs = np.nonzero(labeled.labels == component.id)
                for x, y in zip(xs.tolist(), ys.tolist()):
                    self.assertIs(point_in_polygon(tile_center(x, y), polygon), Location.INSIDE)
                self.assertEqual(polygon_area(polygon), component.tile_count)

    def test_diagonal_tiles_join(self):
        """Tiles touching at a corner belong to one component."""
        mask = np.array([
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
        ], dtype=bool)
        labeled, components = label_mask(mask)
        self.assertEqual(labeled.component_count, 1)
        self.assertEqual(components[0].tile_count, 3)

    def test_holes_are_traced(self):
        """An unwalkable pocket inside a component becomes a hole."""
        map_data = ascii_map("""
            #######
            #.....#
            #.###.#
            #.....#
            #######
        """)
        labeled, components = label_components(map_data.grid)
        self.assertEqual(len(components), 1)
        component = components[0]
        self.assertEqual(len(component.inner_contours), 1)
        self.assertEqual(polygon_area(component.polygon), 12)
        self.assertEqual(component.tile_bbox, (1, 1, 5, 3))

    def test_label_order_is_raster_order(self):
        """Labels follow the raster order of each component's first tile."""
        map_data = ascii_map("""
            ######
            #..#.#
            ####.#
            #.####
            ######
        """)
        labeled, components = label_components(map_data.grid)
        self.assertEqual([c.id for c in components], [1, 2, 3])
        self.assertEqual(labeled.label_at(1, 1), 1)
        self.assertEqual(labeled.label_at(4, 1), 2)
        self.assertEqual(labeled.label_at(1, 3), 3)
        self.assertEqual(labeled.label_at(0, 0), 0)

    def test_unbuildable_predicate(self):
        """A custom predicate labels only the selected tiles."""
        map_data = ascii_map("""
            ######
            #.,,.#
            ######
        """)
        labeled, components = label_components(map_data.grid, unbuildable_predicate)
        self.assertEqual(len(components), 1)
        self.assertEqual(components[0].tile_count, 2)

    def test_empty_grid(self):
        """A grid without walkable tiles has no components."""
        labeled, components = label_components(TileGrid.filled(4, 3, walkable=False))
        self.assertEqual(labeled.component_count, 0)
        self.assertEqual(components, [])


if __name__ == '__main__':
    unittest.main()
