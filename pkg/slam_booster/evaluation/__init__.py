"""
Trajectory metrics, run verification and the experiment harness.

The harness lives in `slam_booster.evaluation.experiments` and is imported
explicitly; it depends on the run driver, which itself uses these metrics.
"""

from .metrics import (
    compute_ate,
    compute_ite,
    ite_series,
    knob_activity,
    map_difference,
    trajectory_summary,
    velocity_error_correlation,
)
from .verification import RunCheck, check_run, verify_corrections, verify_report

__all__ = [
    "RunCheck",
    "check_run",
    "compute_ate",
    "compute_ite",
    "ite_series",
    "knob_activity",
    "map_difference",
    "trajectory_summary",
    "velocity_error_correlation",
    "verify_corrections",
    "verify_report",
]
