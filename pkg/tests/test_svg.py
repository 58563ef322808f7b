"""
Unit tests for SVG rendering.
"""

import tempfile
import unittest
from pathlib import Path
from xml.etree import ElementTree

from error_handler import ErrorType, TerrainError
from models.models import Objective
from svg_renderer import MULTI_CLUSTER_BOX, SEPARATION, SINGLE_CLUSTER_BOX, UNBUILDABLE, render_svg, save_svg
from tests.helpers import ascii_map, corpus_map, deterministic_config
from workflow import analyze


def _render(map_data, tile_px=12):
    result = analyze(map_data, Objective.MIN_SEPARATION_LENGTH, deterministic_config())
    return result, render_svg(result, map_data, tile_px=tile_px)


class TestRenderSvg(unittest.TestCase):
    """Test cases for the SVG figure."""

    def test_valid_document_of_map_size(self):
        """The figure is well-formed and scaled by the tile size."""
        map_data = corpus_map("two_base_valley")
        _, svg = _render(map_data, tile_px=10)
        root = ElementTree.fromstring(svg)
        self.assertTrue(root.tag.endswith("svg"))
        self.assertEqual(float(root.get("width")), 400)
        self.assertEqual(float(root.get("height")), 160)

    def test_separations_are_red_lines(self):
        """One red line per separation; two clusters in a zone get red boxes."""
        result, svg = _render(corpus_map("two_base_valley"))
        self.assertEqual(svg.count(f'stroke="{SEPARATION}"'), len(result.choke_points))
        self.assertEqual(svg.count(f'stroke="{MULTI_CLUSTER_BOX}"'), 2)
        self.assertNotIn(f'stroke="{SINGLE_CLUSTER_BOX}"', svg)

    def test_single_cluster_zone(self):
        """A zone's only cluster gets a blue box and no separation is drawn."""
        _, svg = _render(ascii_map("""
            ########
            #m.....#
            #......#
            ########
        """))
        self.assertIn(f'stroke="{SINGLE_CLUSTER_BOX}"', svg)
        self.assertNotIn(f'stroke="{SEPARATION}"', svg)

    def test_unbuildable_ground_is_blue(self):
        _, svg = _render(corpus_map("central_unbuildable"))
        self.assertIn(f'fill="{UNBUILDABLE}"', svg)

    def test_map_without_walkable_tiles(self):
        """An empty map still renders a valid document."""
        _, svg = _render(ascii_map("""
            ####
            ####
        """))
        ElementTree.fromstring(svg)

    def test_save_svg(self):
        map_data = corpus_map("island")
        result, svg = _render(map_data)
        with tempfile.TemporaryDirectory() as tmp:
            path = save_svg(result, map_data, Path(tmp) / "island.svg")
            self.assertEqual(path.read_text(encoding="utf-8"), svg)

    def test_unwritable_path(self):
        """Write failures surface as I/O errors."""
        map_data = corpus_map("island")
        result, _ = _render(map_data)
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(TerrainError) as ctx:
                save_svg(result, map_data, Path(tmp) / "missing" / "island.svg")
        self.assertEqual(ctx.exception.error_type, ErrorType.IO_ERROR)
        self.assertEqual(ctx.exception.details["function"], "save_svg")


if __name__ == '__main__':
    unittest.main()
