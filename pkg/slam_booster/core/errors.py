"""
Exception hierarchy for SLAM Booster.

Every error carries the name of the component that raised it and, when it
wraps a lower-level failure, the original exception.
"""

from enum import IntEnum
from typing import Optional


class SlamBoosterError(Exception):
    """Root exception for the package."""

    def __init__(self, message: str, component: Optional[str] = None, original_error: Optional[Exception] = None):
        """
        Initialize the error.

        Args:
            message: Error description
            component: Name of the component that failed
            original_error: Original exception that caused this error
        """
        self.component = component
        self.original_error = original_error

        full_message = message
        if component:
            full_message = f"{component}: {message}"

        super().__init__(full_message)


class RejectedInputError(SlamBoosterError):
    """An operation was called with input that violates its precondition."""


class CameraInsideGeometryError(RejectedInputError):
    """The synthetic camera center lies inside solid scene geometry."""


class InvalidSpecError(SlamBoosterError):
    """A scene, trajectory, noise or sweep spec is malformed."""


class ConfigError(SlamBoosterError):
    """The run configuration could not be loaded or validated."""


class DatasetError(SlamBoosterError):
    """Base class for dataset I/O failures."""


class DatasetNotFoundError(DatasetError):
    """A dataset directory or one of its files is missing."""


class MalformedHeaderError(DatasetError):
    """A PGM header, payload or trajectory line could not be parsed."""


class DimensionMismatchError(DatasetError):
    """Frame dimensions disagree with the intrinsics or with each other."""


class UnwritableOutputError(SlamBoosterError):
    """An output file or directory could not be written."""


class TrajectoryLengthMismatchError(SlamBoosterError):
    """Two trajectories that must be compared frame by frame differ in length."""


class UndefinedCorrelationError(SlamBoosterError):
    """A correlation was requested over constant or too few samples."""


class DegenerateGeometryError(SlamBoosterError):
    """The ICP normal equations are singular for the observed geometry."""


class ExitCode(IntEnum):
    """Process exit codes used by the command-line front end."""

    OK = 0
    UNEXPECTED = 1
    INVALID_SPEC = 2
    UNWRITABLE_OUTPUT = 3
    DATASET_ERROR = 4
    CONFIG_ERROR = 5
    PARSE_ERROR = 6
    LENGTH_MISMATCH = 7


def exit_code_for(error: BaseException) -> ExitCode:
    """Map an exception to the exit code the CLI reports for it."""
    if isinstance(error, MalformedHeaderError):
        return ExitCode.PARSE_ERROR
    if isinstance(error, DatasetError):
        return ExitCode.DATASET_ERROR
    if isinstance(error, InvalidSpecError):
        return ExitCode.INVALID_SPEC
    if isinstance(error, ConfigError):
        return ExitCode.CONFIG_ERROR
    if isinstance(error, TrajectoryLengthMismatchError):
        return ExitCode.LENGTH_MISMATCH
    if isinstance(error, (UnwritableOutputError, PermissionError)):
        return ExitCode.UNWRITABLE_OUTPUT
    return ExitCode.UNEXPECTED
