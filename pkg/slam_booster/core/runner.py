"""
BoosterRunner: one pipeline plus one controller threaded over a dataset.

Each frame is routed to the approximation level the controller picks, then
processed by the pipeline with pose correction applied between tracking and
integration. Lost frames are logged and recorded as untracked, never fatal.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ..config.run_config import RunConfig
from ..config.settings import settings
from ..controller.booster import SlamBooster
from ..evaluation.metrics import compute_ite
from ..geometry.camera import CameraIntrinsics
from ..geometry.se3 import Pose
from ..pipeline.icp import TrackResult
from ..pipeline.kinfu import KinectFusion
from ..pipeline.knobs import KnobSettings
from ..pipeline.tsdf import TsdfVolume
from ..storage.dataset import Dataset
from .errors import DimensionMismatchError
from .metrics import FrameLog, MetricsLogger, RunMetrics, RunReport, host_info
from .phase_timer import PhaseDurations

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    logs: List[FrameLog]
    report: RunReport
    trajectory: List[Pose]
    volume: TsdfVolume

    @property
    def ate(self) -> Optional[float]:
        return self.report.ate_m


class BoosterRunner:
    """
    Runs a dataset through the pipeline under the configured strategy.

    A runner owns its pipeline and controller for the duration of `run` and
    can be reused; runs never share state.
    """

    def __init__(
        self,
        config: Optional[RunConfig] = None,
        metrics: Optional[MetricsLogger] = None,
        progress: Optional[bool] = None,
        fixed_knobs: Optional[KnobSettings] = None,
    ):
        self.config = config or RunConfig()
        self.metrics = metrics
        self.fixed_knobs = fixed_knobs
        self.progress = settings.show_progress if progress is None else progress

    # === SETUP ===

    def _intrinsics(self, dataset: Dataset) -> CameraIntrinsics:
        if self.config.intrinsics is None:
            return dataset.intrinsics
        intr = self.config.intrinsics.to_intrinsics()
        if intr.shape != dataset.intrinsics.shape:
            raise DimensionMismatchError(
                f"configured intrinsics are {intr.width}x{intr.height}, dataset frames are "
                f"{dataset.intrinsics.width}x{dataset.intrinsics.height}",
                "runner",
            )
        return intr

    def base_knobs(self) -> KnobSettings:
        """Knobs of uncontrolled frames; a sweep pins them with `fixed_knobs`."""
        if self.fixed_knobs is not None:
            return self.fixed_knobs
        return KnobSettings.accurate(vr=self.config.volume.vr, mu=self.config.volume.mu)

    # === RUN ===

    def run(self, dataset: Dataset, reference: Optional[Sequence[Pose]] = None, name: str = "dataset") -> RunResult:
        """
        Process every frame of `dataset`.

        Args:
            dataset: frames, intrinsics and optional ground truth
            reference: poses to compute ITE against (defaults to the dataset's ground truth)
            name: dataset label for logs

        Raises:
            DimensionMismatchError: reference length or intrinsics disagree with the dataset
        """
        cfg = self.config
        intr = self._intrinsics(dataset)
        truth = list(reference) if reference is not None else dataset.ground_truth
        if truth is not None and len(truth) != len(dataset):
            raise DimensionMismatchError(f"{len(truth)} reference poses for {len(dataset)} frames", "runner")

        initial_pose = dataset.ground_truth[0] if dataset.ground_truth else Pose.identity()
        base = self.base_knobs()
        fusion = KinectFusion(
            intr,
            volume=cfg.volume,
            tracking=cfg.tracking,
            initial_pose=initial_pose,
            reduced_precision=cfg.controller.reduced_precision,
        )
        booster = SlamBooster(cfg.controller, initial_pose=initial_pose, base=base)
        run_metrics = RunMetrics(cfg.controller.strategy)
        trajectory: List[Pose] = []

        if self.metrics is not None:
            self.metrics.log_run_start(cfg.controller.strategy, len(dataset), name)

        frames = tqdm(dataset.frames, desc=f"{cfg.controller.strategy} {name}", disable=not self.progress)
        for index, raw in enumerate(frames):
            durations = PhaseDurations()
            knobs = booster.decide(raw, durations)
            try:
                result = fusion.process_frame(raw, knobs, correct=booster.correct, durations=durations)
                pose, track = result.pose, result.track
            except np.linalg.LinAlgError as e:
                logger.warning(f"Frame {index}: tracking failed ({e}); keeping previous pose")
                track = TrackResult.untracked(fusion.pose, cfg.tracking.pyramid_levels)
                pose = booster.correct(fusion.pose, track)
                fusion.pose = pose
                fusion.frame_index += 1
            decision = booster.finish_frame(knobs)

            if not track.tracked and self.metrics is not None:
                self.metrics.log_untracked(index, track.inlier_fraction, track.rms_residual)

            trajectory.append(pose)
            run_metrics.record(
                FrameLog(
                    frame=index,
                    level=decision.level,
                    csr=knobs.csr,
                    icp=knobs.icp_threshold,
                    pd0=knobs.pd[0],
                    velocity=decision.velocity,
                    surface_trigger=decision.surface_trigger,
                    correction_trigger=decision.correction_trigger,
                    tracked=track.tracked,
                    ite_m=compute_ite(pose, truth[index]) if truth is not None else None,
                    durations=durations,
                )
            )

        echo = {**cfg.echo(), "dataset_name": name, "host": host_info()}
        report = run_metrics.report(echo)
        if self.metrics is not None:
            self.metrics.log_run_summary(report)
        else:
            logger.info(
                f"{report.strategy} on {name}: {report.frames} frames, ATE {report.ate_m}, "
                f"{report.tracked_pct:.1f}% tracked"
            )
        return RunResult(logs=run_metrics.logs, report=report, trajectory=trajectory, volume=fusion.volume)


def run_dataset(
    dataset: Dataset,
    config: Optional[RunConfig] = None,
    reference: Optional[Sequence[Pose]] = None,
    name: str = "dataset",
) -> RunResult:
    """Convenience wrapper: one run with a fresh runner."""
    return BoosterRunner(config).run(dataset, reference=reference, name=name)
