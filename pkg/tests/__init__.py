"""
Test suite for the terrain analysis engine.

This package contains unit and integration tests for:
- Exact geometry, labeling and zoning
- Separation models and the local-search solver
- Region assembly and obstacle destruction
- Map formats, result files and SVG figures
- The command-line interface, benchmark and oracle check
- Complete workflow runs on the map corpus
"""
