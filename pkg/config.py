"""
Configuration Management for the terrain analysis engine.

This module provides centralized configuration management, loading settings
from environment variables (optionally through a .env file) with defaults
matching the documented CLI defaults.

Requirements addressed:
- Contour simplification epsilon and enrichment edge length are configurable
- Clustering threshold is configurable
- Solver timeout, retries, seed and search parameters are configurable
"""

import os
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv


# Load environment variables from .env file
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


@dataclass
class GeometryConfig:
    """Configuration for contour simplification and enrichment."""

    epsilon: float = field(default_factory=lambda: float(os.getenv("TERRAIN_EPSILON", "1.0")))
    max_edge: float = field(default_factory=lambda: float(os.getenv("TERRAIN_MAX_EDGE", "10.0")))

    def validate(self) -> None:
        """Validate geometry configuration."""
        if self.epsilon < 0:
            raise ValueError("TERRAIN_EPSILON must be non-negative")
        if self.max_edge <= 0:
            raise ValueError("TERRAIN_MAX_EDGE must be positive")


@dataclass
class ZoningConfig:
    """Configuration for zoning and resource clustering."""

    cluster_threshold: float = field(
        default_factory=lambda: float(os.getenv("TERRAIN_CLUSTER_THRESHOLD", "12.0"))
    )

    def validate(self) -> None:
        """Validate zoning configuration."""
        if self.cluster_threshold <= 0:
            raise ValueError("TERRAIN_CLUSTER_THRESHOLD must be positive")


@dataclass
class SolverConfig:
    """
    Configuration for the separation solver.

    The time budget of one attempt is n_clusters * base_timeout_ms_per_cluster.
    In deterministic mode the budget is counted in iterations instead of
    milliseconds: iterations_per_100ms iterations per 100 ms of nominal budget.
    """

    base_timeout_ms_per_cluster: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_TIMEOUT_MS_PER_CLUSTER", "100"))
    )
    max_retries_with_doubling: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_MAX_RETRIES", "2"))
    )
    seed: int = field(default_factory=lambda: int(os.getenv("TERRAIN_SEED", "0")))
    plateau_walk_probability: float = field(
        default_factory=lambda: float(os.getenv("TERRAIN_PLATEAU_WALK_PROBABILITY", "0.1"))
    )
    stall_restart_iterations: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_STALL_RESTART_ITERATIONS", "500"))
    )
    neighborhood_sample_size: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_NEIGHBORHOOD_SAMPLE_SIZE", "64"))
    )
    deterministic: bool = field(default_factory=lambda: _env_bool("TERRAIN_DETERMINISTIC", "false"))
    iterations_per_100ms: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_ITERATIONS_PER_100MS", "20000"))
    )
    brute_force_limit: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_BRUTE_FORCE_LIMIT", "200000"))
    )
    cache_capacity: int = field(
        default_factory=lambda: int(os.getenv("TERRAIN_EVAL_CACHE_CAPACITY", "50000"))
    )

    def validate(self) -> None:
        """Validate solver configuration."""
        if self.base_timeout_ms_per_cluster < 1:
            raise ValueError("TERRAIN_TIMEOUT_MS_PER_CLUSTER must be positive")
        if self.max_retries_with_doubling < 0:
            raise ValueError("TERRAIN_MAX_RETRIES must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("TERRAIN_SEED must be an unsigned 64-bit integer")
        if not 0.0 <= self.plateau_walk_probability <= 1.0:
            raise ValueError("TERRAIN_PLATEAU_WALK_PROBABILITY must be between 0 and 1")
        if self.stall_restart_iterations < 1:
            raise ValueError("TERRAIN_STALL_RESTART_ITERATIONS must be positive")
        if self.neighborhood_sample_size < 1:
            raise ValueError("TERRAIN_NEIGHBORHOOD_SAMPLE_SIZE must be positive")
        if self.iterations_per_100ms < 1:
            raise ValueError("TERRAIN_ITERATIONS_PER_100MS must be positive")
        if self.brute_force_limit < 1:
            raise ValueError("TERRAIN_BRUTE_FORCE_LIMIT must be positive")
        if self.cache_capacity < 1:
            raise ValueError("TERRAIN_EVAL_CACHE_CAPACITY must be positive")


@dataclass
class LoggingConfig:
    """Configuration for logging."""

    log_level: str = field(default_factory=lambda: os.getenv("LOG_LEVEL", "WARNING"))
    log_file: Optional[str] = field(default_factory=lambda: os.getenv("LOG_FILE"))
    log_dir: str = field(default_factory=lambda: os.getenv("LOG_DIR", "logs"))
    log_console: bool = field(default_factory=lambda: _env_bool("LOG_CONSOLE", "true"))
    log_detailed: bool = field(default_factory=lambda: _env_bool("LOG_DETAILED", "false"))

    # Component-specific log levels
    workflow_log_level: str = field(default_factory=lambda: os.getenv("WORKFLOW_LOG_LEVEL", "INFO"))
    nodes_log_level: str = field(default_factory=lambda: os.getenv("NODES_LOG_LEVEL", "INFO"))
    geometry_log_level: str = field(default_factory=lambda: os.getenv("GEOMETRY_LOG_LEVEL", "INFO"))


@dataclass
class OutputConfig:
    """Configuration for rendered and serialized outputs."""

    svg_tile_px: int = field(default_factory=lambda: int(os.getenv("TERRAIN_SVG_TILE_PX", "12")))


@dataclass
class AppConfig:
    """Main application configuration."""

    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    zoning: ZoningConfig = field(default_factory=ZoningConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # Application metadata
    app_name: str = "terrain-regions"
    app_version: str = "1.0.0"

    def validate(self) -> None:
        """
        Validate all configuration settings.

        Raises:
            ValueError: If any configuration is invalid
        """
        self.geometry.validate()
        self.zoning.validate()
        self.solver.validate()

        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.logging.log_level.upper() not in valid_log_levels:
            raise ValueError(f"LOG_LEVEL must be one of {valid_log_levels}")
        if self.output.svg_tile_px < 1:
            raise ValueError("TERRAIN_SVG_TILE_PX must be positive")


# Global configuration instance
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """
    Get the global application configuration.

    Returns:
        AppConfig instance

    Note:
        Configuration is loaded once and cached. Call reload_config() to reload.
    """
    global _config
    if _config is None:
        _config = load_config()
    return _config


def load_config() -> AppConfig:
    """
    Load configuration from environment variables.

    Returns:
        AppConfig instance

    Raises:
        ValueError: If configuration is invalid
    """
    config = AppConfig()
    config.validate()
    return config


def reload_config() -> AppConfig:
    """
    Reload configuration from environment variables.

    Returns:
        AppConfig instance
    """
    global _config
    _config = load_config()
    return _config


def print_config(config: Optional[AppConfig] = None) -> None:
    """
    Print configuration settings.

    Args:
        config: Configuration to print (uses global config if None)
    """
    if config is None:
        config = get_config()

    print("=" * 80)
    print(f"{config.app_name} v{config.app_version}")
    print("=" * 80)

    print("\n[Geometry Configuration]")
    print(f"  Simplification Epsilon: {config.geometry.epsilon}")
    print(f"  Max Contour Edge: {config.geometry.max_edge}")

    print("\n[Zoning Configuration]")
    print(f"  Cluster Threshold: {config.zoning.cluster_threshold}")

    print("\n[Solver Configuration]")
    print(f"  Timeout per Cluster: {config.solver.base_timeout_ms_per_cluster}ms")
    print(f"  Max Retries (doubling): {config.solver.max_retries_with_doubling}")
    print(f"  Seed: {config.solver.seed}")
    print(f"  Plateau Walk Probability: {config.solver.plateau_walk_probability}")
    print(f"  Stall Restart Iterations: {config.solver.stall_restart_iterations}")
    print(f"  Neighborhood Sample Size: {config.solver.neighborhood_sample_size}")
    print(f"  Deterministic: {config.solver.deterministic}")
    print(f"  Iterations per 100ms: {config.solver.iterations_per_100ms}")
    print(f"  Brute Force Limit: {config.solver.brute_force_limit}")

    print("\n[Logging Configuration]")
    print(f"  Log Level: {config.logging.log_level}")
    print(f"  Log File: {config.logging.log_file or 'none'}")
    print(f"  Console Output: {config.logging.log_console}")
    print(f"  Detailed Format: {config.logging.log_detailed}")

    print("\n[Output Configuration]")
    print(f"  SVG Tile Size: {config.output.svg_tile_px}px")

    print("=" * 80)


if __name__ == "__main__":
    try:
        print_config(load_config())
    except Exception as e:
        print(f"Error loading configuration: {e}")
