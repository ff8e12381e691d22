import time
from contextlib import contextmanager
from dataclasses import dataclass, fields
from typing import Dict, Iterator

PHASES = ("preprocess", "track", "integrate", "raycast", "controller")


@dataclass
class PhaseDurations:
    """Wall-clock time spent in each phase of one frame, in nanoseconds."""

    preprocess: int = 0
    track: int = 0
    integrate: int = 0
    raycast: int = 0
    controller: int = 0

    @property
    def pipeline_ns(self) -> int:
        """Time of the pipeline phases only (controller excluded)."""
        return self.preprocess + self.track + self.integrate + self.raycast

    @property
    def total_ns(self) -> int:
        return self.pipeline_ns + self.controller

    def add(self, phase: str, elapsed_ns: int) -> None:
        if phase not in PHASES:
            raise KeyError(f"unknown phase {phase!r}")
        setattr(self, phase, getattr(self, phase) + max(0, int(elapsed_ns)))

    def as_dict(self) -> Dict[str, int]:
        return {f"{f.name}_ns": getattr(self, f.name) for f in fields(self)}


@contextmanager
def phase_timer(durations: PhaseDurations, phase: str) -> Iterator[None]:
    """Context manager charging the enclosed block to `phase` (monotonic clock)."""
    start = time.perf_counter_ns()
    try:
        yield
    finally:
        durations.add(phase, time.perf_counter_ns() - start)
