"""
The online approximation controller.

Per frame: during bootstrap run fully accurate; afterwards pick a level from
the camera velocity (PID or step strategy), back off one level when the
previous frame's pose was corrected or the current frame looks at a smooth
surface, and check the tracked pose for implausible jumps.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config.run_config import ControllerConfig
from ..core.phase_timer import PhaseDurations, phase_timer
from ..geometry.se3 import Pose, pose_delta, velocity_of
from ..pipeline.icp import TrackResult
from ..pipeline.knobs import KnobSettings
from ..pipeline.preprocessing import raw_view
from .correction import pose_correction
from .pid import pid_step
from .state import ControllerState
from .step import step_controller_step
from .surface import surface_detection

logger = logging.getLogger(__name__)

UNCONTROLLED = ("default", "accurate")


def _handed_off(state: ControllerState, cfg: ControllerConfig) -> bool:
    return cfg.handoff_frame is not None and state.frame_index >= cfg.handoff_frame


def controller_step(
    state: ControllerState,
    frame: np.ndarray,
    v_prev: float,
    cfg: ControllerConfig,
    base: Optional[KnobSettings] = None,
) -> Tuple[KnobSettings, ControllerState]:
    """
    Knobs for the coming frame.

    Args:
        state: controller state after the previous frame
        frame: current depth frame in meters, used for surface detection
        v_prev: previous frame's measured velocity (m/frame)
        cfg: controller constants and strategy
        base: values for the knobs the controller does not drive (vr, mu, tr, ir)

    Returns:
        (knobs, new state); tr and ir are never changed
    """
    base = base or KnobSettings.accurate()
    if state.in_bootstrap or cfg.strategy in UNCONTROLLED:
        return base, state.advance(surface_trigger=False, level=0)

    plain_pid = _handed_off(state, cfg)
    surface = cfg.surface_enabled and not plain_pid and surface_detection(frame, cfg)
    corrected = cfg.correction_enabled and not plain_pid and state.correction_trigger
    state = state.advance(surface_trigger=surface, correction_trigger=corrected)

    if cfg.strategy == "step":
        return step_controller_step(state, v_prev, cfg, base)

    level = pid_step(state, v_prev, cfg)
    if surface or corrected:
        level = level - 1
    knobs = KnobSettings.from_level(level.level, base, csr_only=cfg.strategy == "pid_csr_only")
    return knobs, state.advance(level=level.level)


@dataclass
class Decision:
    """What the controller did on one frame."""

    frame: int
    knobs: KnobSettings
    level: int
    surface_trigger: bool
    correction_trigger: bool = False
    velocity: float = 0.0


class SlamBooster:
    """
    Drives the controller over a frame sequence.

    Call `decide` before handing a frame to the pipeline, pass `correct` as the
    pipeline's pose hook, and call `finish_frame` afterwards. Controller time
    is charged to the `controller` phase of the durations given to `decide`.
    """

    def __init__(
        self,
        cfg: Optional[ControllerConfig] = None,
        initial_pose: Optional[Pose] = None,
        base: Optional[KnobSettings] = None,
    ):
        self.cfg = cfg or ControllerConfig()
        self.base = base or KnobSettings.accurate()
        self.state = ControllerState.initial(self.cfg, initial_pose)
        self.decision: Optional[Decision] = None
        self._durations: Optional[PhaseDurations] = None

    @property
    def correction_active(self) -> bool:
        return self.cfg.correction_enabled and not self.state.in_bootstrap and not _handed_off(self.state, self.cfg)

    def decide(self, raw: np.ndarray, durations: Optional[PhaseDurations] = None) -> KnobSettings:
        """Pick the knobs for the next raw frame."""
        self._durations = durations if durations is not None else PhaseDurations()
        with phase_timer(self._durations, "controller"):
            view = raw_view(raw, self.state.last_csr)
            knobs, self.state = controller_step(self.state, view, self.state.last_velocity, self.cfg, self.base)
        self.decision = Decision(
            frame=self.state.frame_index,
            knobs=knobs,
            level=self.state.level,
            surface_trigger=self.state.surface_trigger,
        )
        return knobs

    def correct(self, measured: Pose, track: TrackResult) -> Pose:
        """Pose hook: record the measured velocity and apply pose correction."""
        if self._durations is None:
            self._durations = PhaseDurations()
        with phase_timer(self._durations, "controller"):
            state = self.state
            velocity = velocity_of(pose_delta(measured, state.prev_pose))
            if state.in_bootstrap:
                # the stored transform stays identity until control starts
                final, state = measured, state.advance(prev_pose=measured, correction_trigger=False)
            elif self.correction_active:
                final, state = pose_correction(state, measured, self.cfg)
            else:
                final = measured
                state = state.advance(
                    prev_pose=measured,
                    prev_transform=pose_delta(measured, state.prev_pose),
                    correction_trigger=False,
                )
            self.state = state.advance(last_velocity=velocity)
        if self.decision is not None:
            self.decision.velocity = velocity
            self.decision.correction_trigger = state.correction_trigger
        return final

    def finish_frame(self, knobs: KnobSettings) -> Decision:
        """Close the frame: feed the velocity window and move to the next index."""
        state = self.state
        if not state.in_bootstrap:
            state = state.with_velocity(state.last_velocity)
        self.state = state.advance(frame_index=state.frame_index + 1, last_csr=knobs.csr)
        decision, self.decision = self.decision, None
        return decision
