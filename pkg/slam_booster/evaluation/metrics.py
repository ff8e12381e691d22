"""
Trajectory and map error metrics.

ITE is the positional distance between an estimated and a true pose; ATE is
its arithmetic mean over a run. Both trajectories share the simulator's world
frame, so no alignment is performed.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from ..config.knob_table import KNOB_ORDER
from ..core.errors import RejectedInputError, TrajectoryLengthMismatchError, UndefinedCorrelationError
from ..core.metrics import FrameLog
from ..geometry.se3 import Pose
from ..pipeline.tsdf import TsdfVolume

logger = logging.getLogger(__name__)

MIN_CORRELATION_FRAMES = 30


def compute_ite(est: Pose, truth: Pose) -> float:
    """Instantaneous trajectory error in meters (translation only)."""
    return float(np.linalg.norm(np.asarray(est.translation) - np.asarray(truth.translation)))


def ite_series(est: Sequence[Pose], truth: Sequence[Pose]) -> np.ndarray:
    if len(est) != len(truth):
        raise TrajectoryLengthMismatchError(
            f"estimated trajectory has {len(est)} poses, reference has {len(truth)}", "evaluation"
        )
    if not est:
        return np.zeros(0)
    diff = np.stack([p.translation for p in est]) - np.stack([p.translation for p in truth])
    return np.linalg.norm(diff, axis=1)


def compute_ate(est: Sequence[Pose], truth: Sequence[Pose]) -> float:
    """
    Mean ITE over all frames.

    Raises:
        TrajectoryLengthMismatchError: the trajectories differ in length
    """
    ites = ite_series(est, truth)
    if ites.size == 0:
        return 0.0
    return float(np.mean(ites))


def velocity_error_correlation(logs: Sequence[FrameLog]) -> float:
    """
    Pearson r between per-frame velocity and ITE.

    Raises:
        UndefinedCorrelationError: fewer than 30 frames with ground truth, or
            either series is constant
    """
    pairs = [(log.velocity, log.ite_m) for log in logs if log.ite_m is not None]
    if len(pairs) < MIN_CORRELATION_FRAMES:
        raise UndefinedCorrelationError(
            f"need at least {MIN_CORRELATION_FRAMES} frames with ground truth, got {len(pairs)}", "evaluation"
        )
    velocity, ite = (np.asarray(series, dtype=np.float64) for series in zip(*pairs))
    if np.ptp(velocity) == 0 or np.ptp(ite) == 0:
        raise UndefinedCorrelationError("velocity or ITE is constant over the run", "evaluation")
    return float(stats.pearsonr(velocity, ite)[0])


def map_difference(vol_a: TsdfVolume, vol_b: TsdfVolume, threshold: float = 0.2) -> float:
    """
    Fraction of voxels observed in both maps whose tsdf values differ by more
    than `threshold` (in truncation units). Returns 0 when the maps share no
    observed voxel.
    """
    if vol_a.tsdf.shape != vol_b.tsdf.shape:
        raise RejectedInputError(
            f"cannot compare volumes of resolution {vol_a.vr} and {vol_b.vr}", "evaluation"
        )
    both = vol_a.observed() & vol_b.observed()
    count = int(both.sum())
    if count == 0:
        return 0.0
    differs = np.abs(vol_a.tsdf[both].astype(np.float64) - vol_b.tsdf[both]) > threshold
    return float(differs.sum()) / count


def knob_activity(logs: Sequence[FrameLog]) -> pd.DataFrame:
    """
    Per knob and value: how many frames the run spent there, plus trigger counts
    while at that value.
    """
    if not logs:
        return pd.DataFrame(columns=["knob", "value", "frames", "share", "surface_triggers", "correction_triggers"])
    frame = pd.DataFrame(
        {
            "csr": [log.csr for log in logs],
            "icp": [log.icp for log in logs],
            "pd0": [log.pd0 for log in logs],
            "surface_trigger": [log.surface_trigger for log in logs],
            "correction_trigger": [log.correction_trigger for log in logs],
        }
    )
    tables = []
    for knob in KNOB_ORDER:
        grouped = frame.groupby(knob).agg(
            frames=(knob, "size"),
            surface_triggers=("surface_trigger", "sum"),
            correction_triggers=("correction_trigger", "sum"),
        )
        grouped = grouped.reset_index().rename(columns={knob: "value"})
        grouped.insert(0, "knob", knob)
        tables.append(grouped)
    activity = pd.concat(tables, ignore_index=True)
    activity["share"] = activity["frames"] / len(logs)
    return activity[["knob", "value", "frames", "share", "surface_triggers", "correction_triggers"]]


def ite_column(logs: Sequence[FrameLog]) -> Optional[np.ndarray]:
    values = [log.ite_m for log in logs]
    if any(v is None for v in values):
        return None
    return np.asarray(values, dtype=np.float64)


def summarize_ites(ites: np.ndarray) -> Dict[str, float]:
    if ites.size == 0:
        return {"ate_m": 0.0, "max_ite_m": 0.0, "median_ite_m": 0.0}
    return {"ate_m": float(ites.mean()), "max_ite_m": float(ites.max()), "median_ite_m": float(np.median(ites))}


def trajectory_summary(logs: Sequence[FrameLog]) -> Dict[str, Any]:
    """ITE statistics and the velocity/ITE correlation of a run; None where undefined."""
    ites = ite_column(logs)
    summary: Dict[str, Any] = {"ite": summarize_ites(ites) if ites is not None else None}
    try:
        summary["velocity_ite_r"] = velocity_error_correlation(logs)
    except UndefinedCorrelationError as e:
        logger.info(f"velocity/ITE correlation not reported: {e}")
        summary["velocity_ite_r"] = None
    return summary
