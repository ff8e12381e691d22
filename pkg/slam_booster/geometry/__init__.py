"""
Rigid-body math and camera model shared by every other subpackage.

Usage:
    from slam_booster.geometry import Pose, compose, pose_delta, velocity_of

    delta = pose_delta(curr, prev)
    print(f"moved {velocity_of(delta):.3f} m this frame")
"""

from .camera import CameraIntrinsics, VertexNormalMap, check_frame_shape, depth_to_meters
from .se3 import (
    Pose,
    Transform,
    Twist,
    compose,
    inverse,
    look_at,
    orthonormalize,
    pose_delta,
    skew,
    twist_exp,
    velocity_of,
)

__all__ = [
    "Pose",
    "Transform",
    "Twist",
    "compose",
    "inverse",
    "look_at",
    "orthonormalize",
    "pose_delta",
    "skew",
    "twist_exp",
    "velocity_of",
    "CameraIntrinsics",
    "VertexNormalMap",
    "check_frame_shape",
    "depth_to_meters",
]
