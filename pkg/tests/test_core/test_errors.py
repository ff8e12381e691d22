"""
Tests for the exception hierarchy and exit-code mapping.
"""

import pytest

from slam_booster.core.errors import (
    CameraInsideGeometryError,
    ConfigError,
    DatasetNotFoundError,
    DegenerateGeometryError,
    DimensionMismatchError,
    ExitCode,
    InvalidSpecError,
    MalformedHeaderError,
    RejectedInputError,
    SlamBoosterError,
    TrajectoryLengthMismatchError,
    UnwritableOutputError,
    exit_code_for,
)


def test_component_prefix():
    original = ValueError("boom")
    error = ConfigError("bad key", "run_config", original)
    assert str(error) == "run_config: bad key"
    assert error.component == "run_config"
    assert error.original_error is original


def test_message_without_component():
    assert str(SlamBoosterError("plain")) == "plain"


@pytest.mark.parametrize(
    "error,code",
    [
        (InvalidSpecError("x"), ExitCode.INVALID_SPEC),
        (UnwritableOutputError("x"), ExitCode.UNWRITABLE_OUTPUT),
        (PermissionError("x"), ExitCode.UNWRITABLE_OUTPUT),
        (DatasetNotFoundError("x"), ExitCode.DATASET_ERROR),
        (DimensionMismatchError("x"), ExitCode.DATASET_ERROR),
        (ConfigError("x"), ExitCode.CONFIG_ERROR),
        (MalformedHeaderError("x"), ExitCode.PARSE_ERROR),
        (TrajectoryLengthMismatchError("x"), ExitCode.LENGTH_MISMATCH),
        (RejectedInputError("x"), ExitCode.UNEXPECTED),
        (DegenerateGeometryError("x"), ExitCode.UNEXPECTED),
        (RuntimeError("x"), ExitCode.UNEXPECTED),
    ],
)
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


def test_exit_codes_are_distinct():
    values = [code.value for code in ExitCode]
    assert len(values) == len(set(values))
    assert ExitCode.OK == 0


def test_camera_inside_is_rejected_input():
    assert issubclass(CameraInsideGeometryError, RejectedInputError)
