"""
Controller state threaded from frame to frame.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from ..config.knob_table import KNOB_ORDER
from ..config.run_config import ControllerConfig
from ..geometry.se3 import Pose, Transform


@dataclass(frozen=True)
class ControllerState:
    """
    Immutable snapshot; every controller operation returns a new one.

    velocity_window holds the most recent measured velocities (m/frame),
    oldest first, and starts filling only after the bootstrap phase.
    """

    bootstrap_frames: int = 20
    window_length: int = 20
    velocity_window: Tuple[float, ...] = ()
    prev_pose: Pose = field(default_factory=Pose.identity)
    prev_transform: Transform = field(default_factory=lambda: Transform(np.eye(3), np.zeros(3)))
    correction_trigger: bool = False
    surface_trigger: bool = False
    frame_index: int = 0
    last_velocity: float = 0.0
    last_csr: int = 1
    level: int = 0
    # step controller: one level per controlled knob, in importance order
    positions: Tuple[int, ...] = (0,) * len(KNOB_ORDER)

    @classmethod
    def initial(cls, cfg: Optional[ControllerConfig] = None, initial_pose: Optional[Pose] = None) -> "ControllerState":
        cfg = cfg or ControllerConfig()
        return cls(
            bootstrap_frames=cfg.bootstrap_frames,
            window_length=cfg.window,
            prev_pose=initial_pose if initial_pose is not None else Pose.identity(),
        )

    @property
    def in_bootstrap(self) -> bool:
        return self.frame_index < self.bootstrap_frames

    def with_velocity(self, velocity: float) -> "ControllerState":
        """Append a velocity, dropping the oldest entry beyond the window length."""
        window = (self.velocity_window + (float(velocity),))[-self.window_length :]
        return replace(self, velocity_window=window)

    def advance(self, **changes) -> "ControllerState":
        return replace(self, **changes)
