"""
Consistency checks over a finished run's outputs.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..core.errors import TrajectoryLengthMismatchError
from ..core.metrics import FrameLog, RunMetrics, RunReport
from ..geometry.se3 import Pose, Transform, compose, pose_delta

logger = logging.getLogger(__name__)

RECOMPUTED_FIELDS = (
    "frames",
    "ate_m",
    "tracked_pct",
    "mean_frame_ns",
    "median_frame_ns",
    "mean_pipeline_ns",
    "median_controller_ns",
    "csr_changes",
    "icp_changes",
    "pd0_changes",
    "surface_triggers",
    "correction_triggers",
)


def _same(a: Any, b: Any, rel: float) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return math.isclose(float(a), float(b), rel_tol=rel, abs_tol=1e-12)
    return a == b


def _plain(value: Any) -> Any:
    return value.item() if isinstance(value, np.generic) else value


def verify_report(logs: Sequence[FrameLog], report: RunReport, rel: float = 1e-9) -> Dict[str, Tuple[Any, Any]]:
    """
    Recompute every summary field from the frame logs.

    Returns:
        {field: (reported, recomputed)} for each disagreement; empty when consistent
    """
    metrics = RunMetrics(report.strategy)
    for log in logs:
        metrics.record(log)
    recomputed = metrics.report(report.config)
    mismatches = {}
    for name in RECOMPUTED_FIELDS:
        reported, expected = getattr(report, name), getattr(recomputed, name)
        if not _same(reported, expected, rel):
            mismatches[name] = (reported, expected)
    if mismatches:
        logger.warning(f"Report disagrees with its frame log on {sorted(mismatches)}")
    return mismatches


def verify_corrections(
    logs: Sequence[FrameLog],
    trajectory: Sequence[Pose],
    bootstrap_frames: int,
    atol: float = 1e-12,
) -> List[int]:
    """
    Check that every corrected frame's pose is the previous pose extrapolated by
    the stored transform.

    The stored transform is rebuilt from the trajectory: identity through the
    bootstrap phase, the latest accepted inter-frame delta afterwards, and
    unchanged across corrected frames.

    Returns:
        frame indices whose logged pose violates the rule
    """
    if len(logs) != len(trajectory):
        raise TrajectoryLengthMismatchError(
            f"{len(logs)} frame log rows for {len(trajectory)} poses", "verification"
        )
    stored = Transform(np.eye(3), np.zeros(3))
    failures = []
    for t in range(1, len(trajectory)):
        if t < bootstrap_frames:
            continue
        if logs[t].correction_trigger:
            expected = compose(trajectory[t - 1], stored)
            if not expected.is_close(trajectory[t], atol=atol):
                failures.append(logs[t].frame)
        else:
            stored = pose_delta(trajectory[t], trajectory[t - 1])
    if failures:
        logger.warning(f"{len(failures)} corrected frames do not match the extrapolated pose")
    return failures


@dataclass
class RunCheck:
    """Outcome of both self-checks on one run."""

    report_mismatches: Dict[str, Tuple[Any, Any]] = field(default_factory=dict)
    bad_corrections: List[int] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.report_mismatches and not self.bad_corrections

    def as_dict(self) -> Dict[str, Any]:
        return {
            "consistent": self.consistent,
            "report_mismatches": {
                name: [_plain(value) for value in pair] for name, pair in self.report_mismatches.items()
            },
            "bad_corrections": [int(frame) for frame in self.bad_corrections],
        }


def check_run(
    logs: Sequence[FrameLog],
    report: RunReport,
    trajectory: Sequence[Pose],
    bootstrap_frames: int,
) -> RunCheck:
    """Run verify_report and verify_corrections over a finished run."""
    return RunCheck(
        report_mismatches=verify_report(logs, report),
        bad_corrections=verify_corrections(logs, trajectory, bootstrap_frames),
    )
