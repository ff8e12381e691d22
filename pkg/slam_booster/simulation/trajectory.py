"""
Ground-truth camera trajectories: keyframes interpolated per frame.

Positions are interpolated piecewise-linearly, rotations by spherical linear
interpolation between neighbouring keyframes.

JSON form:

    {"frame_count": 120,
     "keyframes": [
        {"frame": 0, "position": [0, 0, -0.3], "look_at": [0, 0.3, 2.0]},
        {"position": [0.4, 0, 0], "euler_deg": [0, 10, 0]}]}

`frame` is optional; keyframes without one are spread evenly over the
sequence. Orientation comes from `look_at` (world up is -y) or from
`euler_deg` (extrinsic x-y-z); with neither the camera looks along +z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.spatial.transform import Rotation, Slerp

from ..core.errors import InvalidSpecError
from ..geometry.se3 import Pose, look_at
from .scene import Scene


@dataclass(frozen=True)
class TrajectorySpec:
    keyframes: Sequence[Pose]
    frame_count: int
    keyframe_frames: Optional[Sequence[int]] = None

    def __post_init__(self):
        if self.frame_count < 2:
            raise InvalidSpecError(f"frame_count must be at least 2, got {self.frame_count}", "trajectory")
        if not self.keyframes:
            raise InvalidSpecError("a trajectory needs at least one keyframe", "trajectory")
        object.__setattr__(self, "keyframes", tuple(self.keyframes))
        frames = self.keyframe_frames
        if frames is None:
            frames = _spread(len(self.keyframes), self.frame_count)
        frames = tuple(int(f) for f in frames)
        if len(frames) != len(self.keyframes):
            raise InvalidSpecError("keyframe_frames must have one entry per keyframe", "trajectory")
        if frames[0] != 0 or (len(frames) > 1 and frames[-1] != self.frame_count - 1):
            raise InvalidSpecError("keyframes must start at frame 0 and end at the last frame", "trajectory")
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise InvalidSpecError(f"keyframe frames must be strictly increasing, got {frames}", "trajectory")
        object.__setattr__(self, "keyframe_frames", frames)

    def check_within(self, scene: Scene) -> None:
        """Raise InvalidSpecError when a keyframe lies outside the scene bounds or inside geometry."""
        for i, key in enumerate(self.keyframes):
            if not scene.contains(key.translation):
                raise InvalidSpecError(f"keyframe {i} lies outside the scene bounds", "trajectory")
            if scene.sdf(key.translation) <= 0:
                raise InvalidSpecError(f"keyframe {i} lies inside scene geometry", "trajectory")

    def with_frame_count(self, frame_count: int) -> "TrajectorySpec":
        """
        Same path resampled to a different number of frames.

        Keyframes keep their relative place in the sequence. When too few
        frames remain to keep them apart, the path is sampled once per new
        frame and every sample becomes a keyframe.
        """
        if frame_count < 2:
            raise InvalidSpecError(f"frame_count must be at least 2, got {frame_count}", "trajectory")
        old_last = self.frame_count - 1
        frames = [round(f * (frame_count - 1) / old_last) for f in self.keyframe_frames]
        if all(b > a for a, b in zip(frames, frames[1:])):
            return TrajectorySpec(self.keyframes, frame_count, frames)
        samples = _poses_at(self, np.linspace(0.0, old_last, frame_count))
        return TrajectorySpec(samples, frame_count, range(frame_count))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "frame_count": self.frame_count,
            "keyframes": [
                {
                    "frame": f,
                    "position": key.translation.tolist(),
                    "quaternion": key.quaternion().tolist(),
                }
                for f, key in zip(self.keyframe_frames, self.keyframes)
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrajectorySpec":
        if not isinstance(data, dict):
            raise InvalidSpecError("trajectory spec must be a JSON object", "trajectory")
        try:
            frame_count = int(data["frame_count"])
            entries = list(data["keyframes"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpecError(f"trajectory spec needs frame_count and keyframes: {e}", "trajectory", e)
        poses = [_keyframe_pose(entry, i) for i, entry in enumerate(entries)]
        frames = None
        if entries and all(isinstance(e, dict) and "frame" in e for e in entries):
            frames = [int(e["frame"]) for e in entries]
        elif any(isinstance(e, dict) and "frame" in e for e in entries):
            raise InvalidSpecError("either every keyframe has a 'frame' or none does", "trajectory")
        return cls(poses, frame_count, frames)


def _spread(count: int, frame_count: int) -> List[int]:
    if count == 1:
        return [0]
    return [round(k * (frame_count - 1) / (count - 1)) for k in range(count)]


def _keyframe_pose(entry: Dict[str, Any], index: int) -> Pose:
    if not isinstance(entry, dict) or "position" not in entry:
        raise InvalidSpecError(f"keyframe {index} needs a position", "trajectory")
    try:
        position = np.asarray(entry["position"], dtype=np.float64).reshape(3)
        orientation_keys = [k for k in ("look_at", "euler_deg", "quaternion") if k in entry]
        if len(orientation_keys) > 1:
            raise InvalidSpecError(f"keyframe {index} gives more than one orientation", "trajectory")
        if "look_at" in entry:
            return look_at(position, entry["look_at"])
        if "euler_deg" in entry:
            rotation = Rotation.from_euler("xyz", entry["euler_deg"], degrees=True).as_matrix()
            return Pose(rotation, position)
        if "quaternion" in entry:
            return Pose.from_quaternion(position, entry["quaternion"])
        return Pose.from_translation(position)
    except InvalidSpecError:
        raise
    except (TypeError, ValueError) as e:
        raise InvalidSpecError(f"keyframe {index} is malformed: {e}", "trajectory", e)


def _poses_at(spec: TrajectorySpec, times: np.ndarray) -> List[Pose]:
    """Poses along the keyframe path at (possibly fractional) frame times."""
    if len(spec.keyframes) == 1:
        return [spec.keyframes[0]] * len(times)

    key_times = np.asarray(spec.keyframe_frames, dtype=np.float64)
    key_positions = np.stack([k.translation for k in spec.keyframes])
    positions = np.column_stack([np.interp(times, key_times, key_positions[:, a]) for a in range(3)])

    key_rotations = Rotation.from_matrix(np.stack([k.rotation for k in spec.keyframes]))
    # Slerp rejects times outside the keyframe span
    rotations = Slerp(key_times, key_rotations)(np.clip(times, key_times[0], key_times[-1])).as_matrix()
    return [Pose(rotations[i], positions[i]) for i in range(len(times))]


def interpolate_trajectory(spec: TrajectorySpec) -> List[Pose]:
    """Ground-truth pose for every frame of the spec."""
    poses = _poses_at(spec, np.arange(spec.frame_count, dtype=np.float64))
    # Keyframe frames reproduce their keyframe exactly
    for f, key in zip(spec.keyframe_frames, spec.keyframes):
        poses[f] = key
    return poses
