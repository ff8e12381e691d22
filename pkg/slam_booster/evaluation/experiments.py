"""
Experiment harness: knob-ranking sweeps and the ablation ladder.

Every run owns its pipeline and controller, so independent runs of a sweep
fan out over a thread pool without sharing state.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config.knob_table import LEVEL_VALUES, SWEEPABLE_KNOBS
from ..config.run_config import RunConfig
from ..config.settings import settings
from ..core.errors import InvalidSpecError
from ..core.runner import BoosterRunner, RunResult
from ..geometry.se3 import Pose
from ..pipeline.knobs import KnobSettings
from ..storage.dataset import Dataset
from .metrics import map_difference

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_VALUES: Dict[str, Tuple] = {
    "csr": LEVEL_VALUES["csr"],
    "icp": LEVEL_VALUES["icp"],
    "pd0": LEVEL_VALUES["pd0"],
    "pd1": (5, 4, 3, 2),
    "pd2": (4, 3, 2, 1),
}

# (rung, strategy, precision_mode), most accurate first
ABLATION_LADDER: Tuple[Tuple[str, str, str], ...] = (
    ("default", "default", "full"),
    ("pid_only", "pid_only", "full"),
    ("pid_surface", "pid_no_correction", "full"),
    ("pid_surface_correction", "pid", "full"),
    ("slam_booster", "pid", "reduced"),
)

SWEEP_COLUMNS = ["knob", "value", "ate_m", "tracked_pct", "mean_frame_ns", "median_frame_ns", "trials"]
LADDER_COLUMNS = [
    "rung",
    "strategy",
    "precision_mode",
    "ate_m",
    "tracked_pct",
    "mean_frame_ns",
    "median_frame_ns",
    "csr_changes",
    "icp_changes",
    "pd0_changes",
    "map_difference",
]


def sweep_knobs(knob: str, value, base: KnobSettings) -> KnobSettings:
    """Accurate knobs with one knob replaced."""
    if knob == "csr":
        return base.with_changes(csr=int(value))
    if knob == "icp":
        return base.with_changes(icp_threshold=float(value))
    if knob in ("pd0", "pd1", "pd2"):
        pd = list(base.pd)
        pd[int(knob[-1])] = int(value)
        return base.with_changes(pd=tuple(pd))
    raise InvalidSpecError(f"unknown sweep knob {knob!r}; expected one of {SWEEPABLE_KNOBS}", "experiments")


def _resolve_workers(workers: Optional[int]) -> int:
    return max(1, int(workers if workers is not None else settings.sweep_workers))


def _fan_out(jobs: Sequence, run_one, workers: int) -> List:
    """Run `run_one(job)` for every job, in parallel when workers > 1; results keep job order."""
    if workers == 1 or len(jobs) <= 1:
        return [run_one(job) for job in jobs]
    results: List = [None] * len(jobs)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(run_one, job): i for i, job in enumerate(jobs)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def reference_trajectory(dataset: Dataset, config: Optional[RunConfig] = None) -> List[Pose]:
    """Trajectory of a level-0 run, used as stand-in ground truth."""
    config = (config or RunConfig()).with_controller(strategy="accurate", precision_mode="full")
    result = BoosterRunner(config).run(dataset, name="reference")
    return result.trajectory


def knob_ranking_sweep(
    dataset: Dataset,
    knob: str,
    values: Optional[Sequence] = None,
    config: Optional[RunConfig] = None,
    trials: int = 1,
    workers: Optional[int] = None,
    reference: Optional[Sequence[Pose]] = None,
) -> pd.DataFrame:
    """
    One full pipeline run per knob value with every other knob at its level-0
    value.

    Args:
        dataset: frames with ground truth (or pass `reference`)
        knob: one of csr, icp, pd0, pd1, pd2
        values: values to try (defaults to the knob's table)
        config: base run config; its strategy is replaced by `default`
        trials: repetitions per value; timing is averaged, ATE comes from the first trial
        workers: thread pool size (defaults to settings.sweep_workers)
        reference: trajectory to measure ATE against instead of the ground truth

    Raises:
        InvalidSpecError: unknown knob, empty value list or trials < 1
    """
    if knob not in SWEEPABLE_KNOBS:
        raise InvalidSpecError(f"unknown sweep knob {knob!r}; expected one of {SWEEPABLE_KNOBS}", "experiments")
    values = tuple(values) if values is not None else DEFAULT_SWEEP_VALUES[knob]
    if not values:
        raise InvalidSpecError("sweep needs at least one value", "experiments")
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}", "experiments")

    config = (config or RunConfig()).with_controller(strategy="default", precision_mode="full")
    base = KnobSettings.accurate(vr=config.volume.vr, mu=config.volume.mu)
    jobs = [(value, sweep_knobs(knob, value, base)) for value in values]

    def run_one(job):
        value, knobs = job
        results = [
            BoosterRunner(config, fixed_knobs=knobs).run(dataset, reference=reference, name=f"{knob}={value}")
            for _ in range(trials)
        ]
        first = results[0].report
        return {
            "knob": knob,
            "value": value,
            "ate_m": first.ate_m,
            "tracked_pct": first.tracked_pct,
            "mean_frame_ns": float(np.mean([r.report.mean_frame_ns for r in results])),
            "median_frame_ns": float(np.mean([r.report.median_frame_ns for r in results])),
            "trials": trials,
        }

    rows = _fan_out(jobs, run_one, _resolve_workers(workers))
    logger.info(f"Swept {knob} over {len(values)} values ({trials} trial(s) each)")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def ablation_ladder(
    dataset: Dataset,
    config: Optional[RunConfig] = None,
    workers: Optional[int] = None,
    reference: Optional[Sequence[Pose]] = None,
    ladder: Sequence[Tuple[str, str, str]] = ABLATION_LADDER,
) -> pd.DataFrame:
    """
    One run per rung of the incremental ladder; reports ATE, frame time, knob
    changes and how far each rung's map drifts from the level-0 map.
    """
    config = config or RunConfig()

    def run_one(rung) -> Tuple[str, RunResult]:
        name, strategy, precision = rung
        rung_config = config.with_controller(strategy=strategy, precision_mode=precision)
        return name, BoosterRunner(rung_config).run(dataset, reference=reference, name=name)

    results = _fan_out(list(ladder), run_one, _resolve_workers(workers))
    baseline = results[0][1].volume

    rows = []
    for (name, strategy, precision), (_, result) in zip(ladder, results):
        report = result.report
        rows.append(
            {
                "rung": name,
                "strategy": strategy,
                "precision_mode": precision,
                "ate_m": report.ate_m,
                "tracked_pct": report.tracked_pct,
                "mean_frame_ns": report.mean_frame_ns,
                "median_frame_ns": report.median_frame_ns,
                "csr_changes": report.csr_changes,
                "icp_changes": report.icp_changes,
                "pd0_changes": report.pd0_changes,
                "map_difference": map_difference(baseline, result.volume),
            }
        )
    logger.info(f"Ablation ladder finished: {len(rows)} rungs")
    return pd.DataFrame(rows, columns=LADDER_COLUMNS)
