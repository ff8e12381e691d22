import json
import logging
import platform
import statistics
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import psutil

from ..config.knob_table import KNOB_ORDER
from ..config.settings import settings
from .phase_timer import PhaseDurations

FRAME_LOG_COLUMNS = (
    "frame",
    "level",
    "csr",
    "icp",
    "pd0",
    "velocity",
    "surface_trigger",
    "correction_trigger",
    "tracked",
    "ite_m",
    "preprocess_ns",
    "track_ns",
    "integrate_ns",
    "raycast_ns",
    "controller_ns",
)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class FrameLog:
    """One processed frame."""

    frame: int
    level: int
    csr: int
    icp: float
    pd0: int
    velocity: float
    surface_trigger: bool
    correction_trigger: bool
    tracked: bool
    ite_m: Optional[float] = None
    durations: PhaseDurations = field(default_factory=PhaseDurations)

    @property
    def frame_ns(self) -> int:
        return self.durations.total_ns

    def knob_values(self) -> Dict[str, float]:
        return {"csr": self.csr, "icp": self.icp, "pd0": self.pd0}

    def as_row(self) -> Dict[str, Any]:
        row = {name: getattr(self, name) for name in FRAME_LOG_COLUMNS[:10]}
        row.update(self.durations.as_dict())
        return row

    @classmethod
    def from_row(cls, row: Dict[str, Any]) -> "FrameLog":
        ite = row.get("ite_m")
        if ite is not None and ite != ite:  # NaN from an empty CSV cell
            ite = None
        return cls(
            frame=int(row["frame"]),
            level=int(row["level"]),
            csr=int(row["csr"]),
            icp=float(row["icp"]),
            pd0=int(row["pd0"]),
            velocity=float(row["velocity"]),
            surface_trigger=bool(row["surface_trigger"]),
            correction_trigger=bool(row["correction_trigger"]),
            tracked=bool(row["tracked"]),
            ite_m=None if ite is None else float(ite),
            durations=PhaseDurations(
                preprocess=int(row["preprocess_ns"]),
                track=int(row["track_ns"]),
                integrate=int(row["integrate_ns"]),
                raycast=int(row["raycast_ns"]),
                controller=int(row["controller_ns"]),
            ),
        )


@dataclass
class RunReport:
    """Summary of one run; every number is recomputable from its frame logs."""

    strategy: str
    frames: int
    ate_m: Optional[float]
    tracked_pct: float
    mean_frame_ns: float
    median_frame_ns: float
    mean_pipeline_ns: float
    median_controller_ns: float
    csr_changes: int
    icp_changes: int
    pd0_changes: int
    surface_triggers: int
    correction_triggers: int
    config: Dict[str, Any] = field(default_factory=dict)

    def knob_changes(self) -> Dict[str, int]:
        return {knob: getattr(self, f"{knob}_changes") for knob in KNOB_ORDER}

    def as_row(self) -> Dict[str, Any]:
        row = asdict(self)
        row["config"] = json.dumps(self.config, sort_keys=True)
        return row


def host_info() -> Dict[str, Any]:
    """Machine description stored next to every run for provenance."""
    memory = psutil.virtual_memory()
    return {
        "platform": platform.platform(),
        "python": platform.python_version(),
        "cpu_count": psutil.cpu_count(logical=True),
        "memory_total_mb": round(memory.total / 1024 / 1024, 1),
    }


class RunMetrics:
    """Accumulates frame logs and derives the run report."""

    def __init__(self, strategy: str = "pid"):
        self.strategy = strategy
        self.logs: List[FrameLog] = []

    def record(self, log: FrameLog) -> None:
        self.logs.append(log)

    @property
    def tracked_count(self) -> int:
        return sum(1 for log in self.logs if log.tracked)

    def knob_change_counts(self) -> Dict[str, int]:
        counts = {knob: 0 for knob in KNOB_ORDER}
        for prev, curr in zip(self.logs, self.logs[1:]):
            before, after = prev.knob_values(), curr.knob_values()
            for knob in KNOB_ORDER:
                if before[knob] != after[knob]:
                    counts[knob] += 1
        return counts

    def ate(self) -> Optional[float]:
        ites = [log.ite_m for log in self.logs if log.ite_m is not None]
        if not ites:
            return None
        return sum(ites) / len(ites)

    def report(self, config: Optional[Dict[str, Any]] = None) -> RunReport:
        frame_ns = [log.frame_ns for log in self.logs] or [0]
        pipeline_ns = [log.durations.pipeline_ns for log in self.logs] or [0]
        controller_ns = [log.durations.controller for log in self.logs] or [0]
        changes = self.knob_change_counts()
        return RunReport(
            strategy=self.strategy,
            frames=len(self.logs),
            ate_m=self.ate(),
            tracked_pct=100.0 * self.tracked_count / max(1, len(self.logs)),
            mean_frame_ns=float(statistics.fmean(frame_ns)),
            median_frame_ns=float(statistics.median(frame_ns)),
            mean_pipeline_ns=float(statistics.fmean(pipeline_ns)),
            median_controller_ns=float(statistics.median(controller_ns)),
            csr_changes=changes["csr"],
            icp_changes=changes["icp"],
            pd0_changes=changes["pd0"],
            surface_triggers=sum(1 for log in self.logs if log.surface_trigger),
            correction_triggers=sum(1 for log in self.logs if log.correction_trigger),
            config=dict(config or {}),
        )


class MetricsLogger:
    """Logger for run events and summaries."""

    def __init__(self, log_dir: Union[str, Path, None] = None, level: Optional[str] = None, to_file: bool = True):
        self.log_dir = Path(log_dir) if log_dir is not None else settings.log_dir
        self.level = (level or settings.log_level).upper()
        self.to_file = to_file
        self.setup_logging()

    def setup_logging(self):
        """Configure the package logger once: stream handler plus a timestamped run log file."""
        self.logger = logging.getLogger("slam_booster")
        self.logger.setLevel(self.level)
        if getattr(self.logger, "_slam_booster_configured", False):
            return

        formatter = logging.Formatter(LOG_FORMAT)
        stream = logging.StreamHandler()
        stream.setFormatter(formatter)
        self.logger.addHandler(stream)

        if self.to_file:
            try:
                self.log_dir.mkdir(parents=True, exist_ok=True)
                stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
                file_handler = logging.FileHandler(self.log_dir / f"slam_booster_{stamp}.log")
                file_handler.setFormatter(formatter)
                self.logger.addHandler(file_handler)
            except OSError as e:
                self.logger.warning(f"Cannot write log files to {self.log_dir}: {e}")
        self.logger._slam_booster_configured = True

    def log_run_start(self, strategy: str, frames: int, dataset: str):
        self.logger.info(f"Starting {strategy} run over {frames} frames of {dataset}")

    def log_untracked(self, frame: int, inlier_fraction: float, rms: float):
        self.logger.info(f"Frame {frame} untracked (inliers {inlier_fraction:.2f}, rms {rms:.4f} m)")

    def log_run_summary(self, report: RunReport):
        ate = "n/a" if report.ate_m is None else f"{report.ate_m * 100:.2f} cm"
        self.logger.info(
            f"Run summary [{report.strategy}]: {report.frames} frames, ATE {ate}, "
            f"{report.tracked_pct:.1f}% tracked, mean frame {report.mean_frame_ns / 1e6:.1f} ms, "
            f"knob changes {report.knob_changes()}"
        )
