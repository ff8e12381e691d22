"""
Run outputs: frame logs, reports, sweep tables and estimated trajectories.

Every file is written under a temporary name and moved into place, so a
failed command never leaves a truncated output behind.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

from ..core.errors import MalformedHeaderError, UnwritableOutputError
from ..core.metrics import FRAME_LOG_COLUMNS, FrameLog, RunReport
from ..geometry.se3 import Pose
from .dataset import PathLike, write_trajectory

logger = logging.getLogger(__name__)

FRAME_LOG_NAME = "frames.csv"
REPORT_NAME = "report.csv"
TRAJECTORY_NAME = "trajectory.txt"
CONFIG_NAME = "config.json"
KNOB_ACTIVITY_NAME = "knobs.csv"
EVALUATION_NAME = "evaluation.json"


def _tmp_path(path: Path) -> Path:
    return path.with_name(f".{path.name}.tmp")


def ensure_output_dir(path: PathLike) -> Path:
    target = Path(path)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise UnwritableOutputError(f"cannot create output directory {target}: {e}", "results", e)
    if not os.access(target, os.W_OK):
        raise UnwritableOutputError(f"output directory {target} is not writable", "results")
    return target


def _commit(path: Path, writer) -> Path:
    tmp = _tmp_path(path)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except OSError as e:
        tmp.unlink(missing_ok=True)
        raise UnwritableOutputError(f"cannot write {path}: {e}", "results", e)
    return path


def write_table(path: PathLike, table: pd.DataFrame) -> Path:
    return _commit(Path(path), lambda tmp: table.to_csv(tmp, index=False))


def write_json(path: PathLike, document: Dict[str, Any]) -> Path:
    text = json.dumps(document, indent=2, sort_keys=True)
    return _commit(Path(path), lambda tmp: tmp.write_text(text + "\n", encoding="utf-8"))


def write_estimated_trajectory(path: PathLike, poses: Sequence[Pose]) -> Path:
    return _commit(Path(path), lambda tmp: write_trajectory(tmp, poses))


def frame_log_table(logs: Iterable[FrameLog]) -> pd.DataFrame:
    return pd.DataFrame([log.as_row() for log in logs], columns=list(FRAME_LOG_COLUMNS))


def report_table(reports: Iterable[RunReport]) -> pd.DataFrame:
    return pd.DataFrame([report.as_row() for report in reports])


def read_frame_logs(path: PathLike) -> List[FrameLog]:
    table = pd.read_csv(path)
    missing = [c for c in FRAME_LOG_COLUMNS if c not in table.columns]
    if missing:
        raise MalformedHeaderError(f"{path}: frame log lacks columns {missing}", "results")
    return [FrameLog.from_row(row) for row in table.to_dict(orient="records")]


def write_run_outputs(
    out_dir: PathLike,
    logs: Sequence[FrameLog],
    report: RunReport,
    trajectory: Sequence[Pose],
    config: Dict[str, Any],
    activity: Optional[pd.DataFrame] = None,
    evaluation: Optional[Dict[str, Any]] = None,
) -> Dict[str, Path]:
    """
    Write the files of one run into `out_dir` and return their paths.

    The config echo, trajectory, frame log and report are always written; the
    knob-activity table and the evaluation summary only when given.
    """
    target = ensure_output_dir(out_dir)
    written = {
        "config": write_json(target / CONFIG_NAME, config),
        "trajectory": write_estimated_trajectory(target / TRAJECTORY_NAME, trajectory),
        "frames": write_table(target / FRAME_LOG_NAME, frame_log_table(logs)),
        "report": write_table(target / REPORT_NAME, report_table([report])),
    }
    if activity is not None:
        written["knobs"] = write_table(target / KNOB_ACTIVITY_NAME, activity)
    if evaluation is not None:
        written["evaluation"] = write_json(target / EVALUATION_NAME, evaluation)
    logger.info(f"Wrote run outputs to {target}")
    return written


def write_sweep_outputs(out_dir: PathLike, label: str, table: pd.DataFrame, config: Dict[str, Any]) -> Dict[str, Path]:
    """Write a sweep's config echo and result table (`<label>.csv`) into `out_dir`."""
    target = ensure_output_dir(out_dir)
    written = {
        "config": write_json(target / CONFIG_NAME, config),
        "table": write_table(target / f"{label}.csv", table),
    }
    logger.info(f"Wrote {len(table)} sweep rows to {written['table']}")
    return written


def check_writable(path: PathLike) -> Path:
    """Fail early, without creating anything, if `path` could not be created or written."""
    target = Path(path).absolute()
    existing = target
    while not existing.exists():
        if existing.parent == existing:
            break
        existing = existing.parent
    if not existing.is_dir() or not os.access(existing, os.W_OK):
        raise UnwritableOutputError(f"cannot write under {existing} (needed for {target})", "results")
    return target
