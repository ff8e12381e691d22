"""
Frame and scene builders shared by the test modules.
"""

from typing import Optional

import numpy as np

from slam_booster.geometry.camera import CameraIntrinsics
from slam_booster.simulation.scene import Box, Plane, Scene

# Half the default resolution keeps simulator-backed tests quick
SMALL_INTRINSICS = CameraIntrinsics().scaled(2)


def constant_raw(value_mm: int, intr: Optional[CameraIntrinsics] = None) -> np.ndarray:
    intr = intr or CameraIntrinsics()
    return np.full(intr.shape, value_mm, dtype=np.uint16)


def checkerboard_raw(near_mm: int, far_mm: int, intr: Optional[CameraIntrinsics] = None) -> np.ndarray:
    """Alternating near/far pixels, so every region holds equal counts of both."""
    intr = intr or CameraIntrinsics()
    rows, cols = np.indices(intr.shape)
    return np.where((rows + cols) % 2 == 0, near_mm, far_mm).astype(np.uint16)


def box_scene() -> Scene:
    """Back wall, floor, side wall and two boxes: enough structure to constrain all six DOF."""
    return Scene(
        [
            Plane([0.0, 0.0, 2.2], [0.0, 0.0, -1.0]),
            Plane([0.0, 1.0, 0.0], [0.0, -1.0, 0.0]),
            Plane([-1.6, 0.0, 0.0], [1.0, 0.0, 0.0]),
            Box([0.3, 0.6, 1.5], [0.25, 0.4, 0.2]),
            Box([-0.5, 0.2, 1.8], [0.2, 0.2, 0.2]),
        ],
        bounds_min=[-2.4, -2.4, -2.4],
        bounds_max=[2.4, 2.4, 2.4],
    )
