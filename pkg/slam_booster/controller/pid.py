"""
PID mapping from camera velocity to an approximation level.
"""

import math

import numpy as np

from ..config.knob_table import MAX_LEVEL
from ..config.run_config import ControllerConfig
from .levels import ACCURATE, ApproxLevel
from .state import ControllerState


def proportional_level(v_prev: float, cfg: ControllerConfig) -> ApproxLevel:
    """P term alone: the slower the camera, the more approximation."""
    if v_prev >= cfg.v_ref:
        return ACCURATE
    steps = math.floor((cfg.v_ref - v_prev) / cfg.v_ref * cfg.p_steps)
    return ApproxLevel.clamped(min(MAX_LEVEL, steps))


def pid_step(state: ControllerState, v_prev: float, cfg: ControllerConfig) -> ApproxLevel:
    """
    Approximation level for the next frame.

    At or above v_ref the most accurate level is returned outright. Otherwise
    the proportional level is refined by the velocity window: a window mean
    above v_ref backs off one level, and a window that is strictly decreasing
    (strictly increasing) over its whole length adds (removes) one level.
    """
    if v_prev >= cfg.v_ref:
        return ACCURATE
    level = proportional_level(v_prev, cfg)

    window = np.asarray(state.velocity_window, dtype=np.float64)
    if window.size and window.mean() > cfg.v_ref:
        level = level - 1
    if window.size >= 2:
        diffs = np.diff(window)
        if np.all(diffs < 0):
            level = level + 1
        elif np.all(diffs > 0):
            level = level - 1
    return level
