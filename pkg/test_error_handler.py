"""
Test script for error handler module.
"""

from error_handler import (
    ErrorType,
    TerrainError,
    error_handler_decorator,
    exit_code_for,
    get_user_friendly_message,
    handle_error,
    is_recoverable_error,
)


def test_error_messages():
    """Test user-friendly error messages."""
    print("\n" + "=" * 80)
    print("Testing User-Friendly Error Messages")
    print("=" * 80)

    for error_type in ErrorType:
        msg = get_user_friendly_message(error_type, include_suggestions=False)
        assert msg, f"{error_type.value} has no message"
        print(f"  {error_type.value}: {msg}")

    msg = get_user_friendly_message(ErrorType.MODEL_TOO_SMALL)
    assert "Suggestions:" in msg and "--max-edge" in msg
    print("\n✓ Suggestions appended")

    msg = get_user_friendly_message(ErrorType.IO_ERROR, custom_message="Disk full.", include_suggestions=False)
    assert msg == "Disk full."
    print("✓ Custom message used")


def test_terrain_error():
    print("\n" + "=" * 80)
    print("Testing TerrainError")
    print("=" * 80)

    error = TerrainError(ErrorType.MAP_VALIDATION_ERROR, "Tile (3, 4) is buildable but not walkable",
                         details={"tile": (3, 4)})
    assert error.tile == (3, 4)
    assert str(error) == error.message
    data = error.to_dict()
    assert data["error_type"] == "map_validation_error"
    assert data["details"] == {"tile": (3, 4)}
    assert data["recoverable"] is False
    print(f"✓ {data}")


def test_recoverability_and_exit_codes():
    print("\n" + "=" * 80)
    print("Testing Recoverability and Exit Codes")
    print("=" * 80)

    cases = [
        (TerrainError(ErrorType.MODEL_TOO_SMALL, "zone 3"), True, 2),
        (TerrainError(ErrorType.INFEASIBLE_AFTER_RETRIES, "zone 4"), True, 2),
        (TerrainError(ErrorType.IO_ERROR, "missing", recoverable=True), True, 2),
        (TerrainError(ErrorType.MAP_PARSE_ERROR, "bad row"), False, 1),
        (ValueError("boom"), False, 1),
    ]
    for error, recoverable, code in cases:
        assert is_recoverable_error(error) is recoverable, error
        assert exit_code_for(error) == code, error
        print(f"✓ {type(error).__name__}({error}): recoverable={recoverable}, exit {code}")


def test_handle_error():
    print("\n" + "=" * 80)
    print("Testing handle_error")
    print("=" * 80)

    info = handle_error(TerrainError(ErrorType.MODEL_TOO_SMALL, "Zone 2 keeps 0 candidates"), context={"zone": 2})
    assert info["error_type"] == "model_too_small"
    assert info["recoverable"] is True
    assert info["context"] == {"zone": 2}
    assert "Suggestions" not in info["user_message"]
    print(f"✓ Recoverable error: {info['error_message']}")

    info = handle_error(KeyError("x"), default_error_type=ErrorType.NODE_ERROR)
    assert info["error_type"] == "node_error"
    assert info["recoverable"] is False
    print("✓ Foreign exception mapped to the default type")


def test_decorator():
    print("\n" + "=" * 80)
    print("Testing error_handler_decorator")
    print("=" * 80)

    @error_handler_decorator(ErrorType.NODE_ERROR, log_level="warning")
    def failing_stage(state):
        return state["missing"]

    try:
        failing_stage({})
        raise AssertionError("expected TerrainError")
    except TerrainError as e:
        assert e.error_type is ErrorType.NODE_ERROR
        assert e.details == {"function": "failing_stage"}
        assert isinstance(e.__cause__, KeyError)
        print(f"✓ Wrapped: {e.message}")

    @error_handler_decorator()
    def passthrough():
        raise TerrainError(ErrorType.UNKNOWN_OBSTACLE, "No obstacle 'D9'")

    try:
        passthrough()
        raise AssertionError("expected TerrainError")
    except TerrainError as e:
        assert e.error_type is ErrorType.UNKNOWN_OBSTACLE
        print("✓ TerrainError passes through unchanged")


if __name__ == "__main__":
    test_error_messages()
    test_terrain_error()
    test_recoverability_and_exit_codes()
    test_handle_error()
    test_decorator()

    print("\n" + "=" * 80)
    print("All tests completed!")
    print("=" * 80)
