"""
Error Handler Module for the terrain analysis engine.

This module provides the error taxonomy of the pipeline, user-facing error
messages, structured error logging and the mapping from errors to CLI exit
codes.

Requirements addressed:
- Map loading reports parse errors and validation errors naming the first
  offending tile
- Per-zone solver failures are reported as diagnostics, never as crashes
- Errors are logged with sufficient detail for debugging
"""

import logging
import traceback
from enum import Enum
from functools import wraps
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)


class ErrorType(Enum):
    """Enumeration of error types in the terrain analysis pipeline."""

    # Map input errors
    MAP_PARSE_ERROR = "map_parse_error"
    MAP_VALIDATION_ERROR = "map_validation_error"
    UNKNOWN_OBSTACLE = "unknown_obstacle"
    FORMAT_UNSUPPORTED = "format_unsupported"

    # Geometry errors
    DEGENERATE_RING = "degenerate_ring"
    CHORD_NOT_ON_RING = "chord_not_on_ring"
    CHORD_EXITS_POLYGON = "chord_exits_polygon"

    # Model and solver errors
    MODEL_TOO_SMALL = "model_too_small"
    INFEASIBLE_AFTER_RETRIES = "infeasible_after_retries"
    INSTANCE_TOO_LARGE = "instance_too_large"

    # Pipeline errors
    NODE_ERROR = "node_error"
    IO_ERROR = "io_error"

    # General errors
    CONFIGURATION_ERROR = "configuration_error"
    UNKNOWN_ERROR = "unknown_error"


class TerrainError(Exception):
    """Base exception class for terrain analysis errors."""

    def __init__(
        self,
        error_type: ErrorType,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        recoverable: bool = False
    ):
        """
        Initialize a terrain error.

        Args:
            error_type: Type of error from ErrorType enum
            message: Human-readable error message
            details: Additional error details (e.g. {"tile": (x, y)})
            recoverable: Whether the pipeline can continue past this error
        """
        self.error_type = error_type
        self.message = message
        self.details = details or {}
        self.recoverable = recoverable
        super().__init__(self.message)

    @property
    def tile(self) -> Optional[tuple]:
        """Tile coordinate of the first offender, when the error names one."""
        return self.details.get("tile")

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for logging/serialization."""
        return {
            "error_type": self.error_type.value,
            "message": self.message,
            "details": self.details,
            "recoverable": self.recoverable
        }


# Errors that leave a zone unsplit but let the analysis go on
RECOVERABLE_TYPES = frozenset({
    ErrorType.MODEL_TOO_SMALL,
    ErrorType.INFEASIBLE_AFTER_RETRIES,
})


ERROR_MESSAGES = {
    ErrorType.MAP_PARSE_ERROR: {
        "message": "The map file could not be parsed.",
        "suggestions": [
            "Check that the file is valid JSON or the documented ASCII alphabet",
            "Name the file .json for JSON maps or .txt, .map or .ascii for ASCII maps"
        ]
    },
    ErrorType.MAP_VALIDATION_ERROR: {
        "message": "The map violates a structural invariant.",
        "suggestions": [
            "Inspect the tile named in the error",
            "Buildable tiles must be walkable and resources must sit on buildable ground"
        ]
    },
    ErrorType.UNKNOWN_OBSTACLE: {
        "message": "No destructible obstacle has that id.",
        "suggestions": [
            "ASCII maps name obstacles D1, D2, ... in row-major order of their first tile"
        ]
    },
    ErrorType.FORMAT_UNSUPPORTED: {
        "message": "The map cannot be written in the requested format.",
        "suggestions": [
            "Use the JSON format for raised unbuildable tiles, custom amounts or hit points"
        ]
    },
    ErrorType.DEGENERATE_RING: {
        "message": "A contour ring has fewer than three vertices or no area.",
        "suggestions": []
    },
    ErrorType.CHORD_NOT_ON_RING: {
        "message": "A chord endpoint does not lie on the polygon boundary.",
        "suggestions": []
    },
    ErrorType.CHORD_EXITS_POLYGON: {
        "message": "A chord leaves the polygon between its endpoints.",
        "suggestions": []
    },
    ErrorType.MODEL_TOO_SMALL: {
        "message": "Too few valid separations survive filtering for this zone.",
        "suggestions": [
            "Lower --max-edge to add contour points",
            "Lower --epsilon to keep more contour detail"
        ]
    },
    ErrorType.INFEASIBLE_AFTER_RETRIES: {
        "message": "No separation set satisfying every constraint was found in time.",
        "suggestions": [
            "Raise --timeout-ms-per-cluster or --max-retries",
            "Try another --seed"
        ]
    },
    ErrorType.INSTANCE_TOO_LARGE: {
        "message": "The model is too large for exhaustive enumeration.",
        "suggestions": [
            "Use the local search solver for this zone"
        ]
    },
    ErrorType.NODE_ERROR: {
        "message": "An error occurred in one of the pipeline stages.",
        "suggestions": []
    },
    ErrorType.IO_ERROR: {
        "message": "A file could not be read or written.",
        "suggestions": [
            "Check the path and its permissions"
        ]
    },
    ErrorType.CONFIGURATION_ERROR: {
        "message": "The configuration is invalid.",
        "suggestions": [
            "Check the TERRAIN_* environment variables and the command-line flags"
        ]
    },
    ErrorType.UNKNOWN_ERROR: {
        "message": "An unexpected error occurred.",
        "suggestions": []
    },
}


def get_user_friendly_message(
    error_type: ErrorType,
    custom_message: Optional[str] = None,
    include_suggestions: bool = True
) -> str:
    """
    Get a user-facing error message for a given error type.

    Args:
        error_type: Type of error from ErrorType enum
        custom_message: Optional message used instead of the default
        include_suggestions: Whether to append suggestions

    Returns:
        Formatted message
    """
    error_info = ERROR_MESSAGES.get(error_type, ERROR_MESSAGES[ErrorType.UNKNOWN_ERROR])
    message = custom_message if custom_message else error_info["message"]

    if include_suggestions and error_info.get("suggestions"):
        message += "\n\nSuggestions:\n"
        for suggestion in error_info["suggestions"]:
            message += f"  - {suggestion}\n"

    return message


def log_error(
    error: Exception,
    context: Optional[Dict[str, Any]] = None,
    level: str = "error"
) -> None:
    """
    Log an error with detailed context for debugging.

    Args:
        error: The exception that occurred
        context: Additional context information
        level: Logging level ('error', 'warning', 'critical')
    """
    log_func = getattr(logger, level, logger.error)

    error_msg = f"Error occurred: {type(error).__name__}: {str(error)}"
    if context:
        error_msg += f"\nContext: {context}"
    if level in ["error", "critical"]:
        error_msg += f"\nTraceback:\n{traceback.format_exc()}"

    log_func(error_msg)

    if isinstance(error, TerrainError):
        log_func(f"Error details: {error.to_dict()}")


def handle_error(
    error: Exception,
    context: Optional[Dict[str, Any]] = None,
    default_error_type: ErrorType = ErrorType.UNKNOWN_ERROR
) -> Dict[str, Any]:
    """
    Handle an error and return diagnostic information.

    Recoverable errors are logged as warnings, everything else as errors.

    Args:
        error: The exception that occurred
        context: Where the error occurred (stage, zone, ...)
        default_error_type: Error type used when error is not a TerrainError

    Returns:
        Dictionary with error information and user message
    """
    if isinstance(error, TerrainError):
        error_type = error.error_type
        error_message = error.message
        recoverable = is_recoverable_error(error)
    else:
        error_type = default_error_type
        error_message = str(error)
        recoverable = False

    log_error(error, context=context, level="warning" if recoverable else "error")

    return {
        "error_type": error_type.value,
        "error_message": error_message,
        "user_message": get_user_friendly_message(error_type, include_suggestions=False),
        "recoverable": recoverable,
        "context": context or {}
    }


def error_handler_decorator(
    error_type: ErrorType = ErrorType.NODE_ERROR,
    log_level: str = "error"
):
    """
    Decorator wrapping unexpected exceptions into TerrainError.

    Args:
        error_type: Error type assigned to wrapped exceptions
        log_level: Logging level for wrapped exceptions

    Returns:
        Decorated function

    Example:
        @error_handler_decorator(ErrorType.NODE_ERROR)
        def label_stage(state):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except TerrainError:
                raise
            except Exception as e:
                context = {"function": func.__name__}
                log_error(e, context=context, level=log_level)
                raise TerrainError(
                    error_type=error_type,
                    message=f"Error in {func.__name__}: {str(e)}",
                    details=context
                ) from e
        return wrapper
    return decorator


def is_recoverable_error(error: Exception) -> bool:
    """
    Determine whether the pipeline can continue after an error.

    Args:
        error: The exception to check

    Returns:
        True if the error is recoverable
    """
    if isinstance(error, TerrainError):
        return error.recoverable or error.error_type in RECOVERABLE_TYPES
    return False


def exit_code_for(error: Exception) -> int:
    """
    Map an error reaching the CLI to a process exit status.

    Args:
        error: The exception that stopped the command

    Returns:
        2 for recoverable solver errors, 1 otherwise
    """
    return 2 if is_recoverable_error(error) else 1
