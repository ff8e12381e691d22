"""
Discrete approximation levels.
"""

from dataclasses import dataclass

from ..config.knob_table import MAX_LEVEL
from ..core.errors import RejectedInputError


@dataclass(frozen=True, order=True)
class ApproxLevel:
    """
    0 is the most accurate setting, MAX_LEVEL the most approximate.
    Adding or subtracting saturates at the bounds.
    """

    level: int = 0

    def __post_init__(self):
        if not 0 <= int(self.level) <= MAX_LEVEL:
            raise RejectedInputError(f"level must be in [0, {MAX_LEVEL}], got {self.level}", "ApproxLevel")
        object.__setattr__(self, "level", int(self.level))

    @classmethod
    def clamped(cls, value: int) -> "ApproxLevel":
        return cls(max(0, min(MAX_LEVEL, int(value))))

    def __add__(self, steps: int) -> "ApproxLevel":
        return ApproxLevel.clamped(self.level + steps)

    def __sub__(self, steps: int) -> "ApproxLevel":
        return ApproxLevel.clamped(self.level - steps)

    def __int__(self) -> int:
        return self.level


ACCURATE = ApproxLevel(0)
