"""
Pose correction: reject implausible inter-frame jumps.
"""

import logging
from typing import Tuple

from ..config.run_config import ControllerConfig
from ..geometry.se3 import Pose, compose, pose_delta, velocity_of
from .state import ControllerState

logger = logging.getLogger(__name__)


def pose_correction(state: ControllerState, measured: Pose, cfg: ControllerConfig) -> Tuple[Pose, ControllerState]:
    """
    Accept the measured pose or replace it by the previous motion extrapolated
    from the previous pose.

    A jump whose translation exceeds correction_threshold or whose rotation
    exceeds rotation_correction_threshold is replaced by
    compose(prev_pose, prev_transform) and the stored transform is kept.
    Otherwise the measured pose stands and its delta becomes the stored
    transform.
    """
    delta = pose_delta(measured, state.prev_pose)
    jump = velocity_of(delta)
    turn = delta.rotation_angle()
    if jump > cfg.correction_threshold or turn > cfg.rotation_correction_threshold:
        final = compose(state.prev_pose, state.prev_transform)
        logger.debug(f"frame {state.frame_index}: pose corrected (jump {jump:.4f} m, turn {turn:.4f} rad)")
        return final, state.advance(prev_pose=final, correction_trigger=True)
    return measured, state.advance(prev_pose=measured, prev_transform=delta, correction_trigger=False)
