"""
Synthetic depth camera: sphere tracing of a signed-distance scene.
"""

import logging

import numpy as np

from ..core.errors import CameraInsideGeometryError
from ..geometry.camera import CameraIntrinsics
from ..geometry.se3 import Pose
from .scene import Scene

logger = logging.getLogger(__name__)

HIT_EPSILON = 1e-4
MAX_STEPS = 128
MAX_RANGE = 8.0
MAX_DEPTH_MM = 65535


def render_depth(scene: Scene, pose: Pose, intr: CameraIntrinsics) -> np.ndarray:
    """
    Render a raw depth frame (uint16 millimeters, 0 = miss).

    A pixel hits when the scene distance drops below HIT_EPSILON; it misses after
    MAX_STEPS steps, beyond MAX_RANGE meters or once the ray leaves the scene
    bounds. Stored depth is the camera-frame z of the hit, rounded to 1 mm.

    Raises:
        CameraInsideGeometryError: the camera center is not in free space
    """
    origin = np.asarray(pose.translation, dtype=np.float64)
    if scene.sdf(origin) <= 0.0:
        raise CameraInsideGeometryError(f"camera at {origin.tolist()} is inside scene geometry", "renderer")

    dirs_cam = intr.ray_directions().reshape(-1, 3)
    dirs_cam /= np.linalg.norm(dirs_cam, axis=1, keepdims=True)
    dirs_world = dirs_cam @ pose.rotation.T

    n = dirs_cam.shape[0]
    t = np.zeros(n)
    hit = np.zeros(n, dtype=bool)
    active = np.arange(n)

    for _ in range(MAX_STEPS):
        if active.size == 0:
            break
        points = origin + t[active, None] * dirs_world[active]
        dist = scene.sdf(points)
        landed = dist < HIT_EPSILON
        hit[active[landed]] = True
        t[active] += np.where(landed, 0.0, dist)
        still = ~landed
        advanced = origin + t[active, None] * dirs_world[active]
        still &= t[active] <= MAX_RANGE
        still &= scene.contains(advanced)
        active = active[still]

    z = t * dirs_cam[:, 2]
    depth_mm = np.where(hit, np.rint(z * 1000.0), 0.0)
    depth_mm = np.clip(depth_mm, 0, MAX_DEPTH_MM)
    return depth_mm.astype(np.uint16).reshape(intr.shape)
