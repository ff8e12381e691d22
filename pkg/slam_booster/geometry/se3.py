"""
Rigid-body math for camera poses.

Convention (used everywhere in the package):
    A Pose maps camera coordinates to world coordinates, p_w = R p_c + t.
    compose(a, t) applies the transform t after a, i.e. the homogeneous
    product t·a, matching the pose update Pose_t = T_{t-1} * Pose_{t-1}.
    pose_delta(curr, prev) is the transform T with compose(prev, T) = curr,
    i.e. T = curr·prev^-1.

Rotations are stored as 3x3 matrices. Quaternions only show up in
trajectory file I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.transform import Rotation

# compose() re-orthonormalizes once RᵀR drifts this far from identity
_ORTHO_DRIFT_TOL = 1e-12
_SMALL_ANGLE = 1e-8


def _frozen(array, shape) -> np.ndarray:
    out = np.array(array, dtype=np.float64).reshape(shape)
    out.setflags(write=False)
    return out


def orthonormalize(rotation: np.ndarray) -> np.ndarray:
    """Nearest rotation matrix (SVD projection, determinant +1)."""
    u, _, vt = np.linalg.svd(rotation)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] *= -1
        r = u @ vt
    return r


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid-body pose, camera-to-world."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", _frozen(self.rotation, (3, 3)))
        object.__setattr__(self, "translation", _frozen(self.translation, (3,)))

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls(matrix[:3, :3], matrix[:3, 3])

    @classmethod
    def from_translation(cls, translation):
        return cls(np.eye(3), translation)

    @classmethod
    def from_quaternion(cls, translation, quaternion_xyzw):
        """Build from a translation and a unit quaternion in (x, y, z, w) order."""
        return cls(Rotation.from_quat(quaternion_xyzw).as_matrix(), translation)

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def quaternion(self) -> np.ndarray:
        """Rotation as a unit quaternion (x, y, z, w)."""
        return Rotation.from_matrix(np.array(self.rotation)).as_quat()

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform points of shape (..., 3)."""
        return points @ self.rotation.T + self.translation

    def rotation_angle(self) -> float:
        """Angle of the rotation component in radians, in [0, pi]."""
        cos_angle = (np.trace(self.rotation) - 1.0) / 2.0
        return float(np.arccos(np.clip(cos_angle, -1.0, 1.0)))

    def is_close(self, other: "Pose", atol: float = 1e-9) -> bool:
        return bool(
            np.allclose(self.rotation, other.rotation, atol=atol, rtol=0.0)
            and np.allclose(self.translation, other.translation, atol=atol, rtol=0.0)
        )

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return bool(np.array_equal(self.rotation, other.rotation) and np.array_equal(self.translation, other.translation))

    def __hash__(self):
        return hash((self.rotation.tobytes(), self.translation.tobytes()))

    def __repr__(self):
        t = ", ".join(f"{v:.4f}" for v in self.translation)
        return f"{type(self).__name__}(t=[{t}], angle={np.degrees(self.rotation_angle()):.3f}deg)"


class Transform(Pose):
    """Relative rigid motion between two poses (same layout as Pose)."""


@dataclass(frozen=True)
class Twist:
    """6-vector ICP increment: linear part in meters, angular part in radians."""

    linear: np.ndarray
    angular: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", _frozen(self.linear, (3,)))
        object.__setattr__(self, "angular", _frozen(self.angular, (3,)))

    @classmethod
    def from_vector(cls, xi: np.ndarray):
        """From the stacked (linear, angular) 6-vector the ICP solver produces."""
        xi = np.asarray(xi, dtype=np.float64)
        return cls(xi[:3], xi[3:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.linear, self.angular])

    def squared_norm(self) -> float:
        return float(self.linear @ self.linear + self.angular @ self.angular)


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix [v]x."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def compose(a: Pose, t: Union[Transform, Pose]) -> Pose:
    """Apply t after a: the homogeneous product t·a."""
    rotation = t.rotation @ a.rotation
    drift = np.abs(rotation.T @ rotation - np.eye(3)).max()
    if drift > _ORTHO_DRIFT_TOL:
        rotation = orthonormalize(rotation)
    translation = t.rotation @ a.translation + t.translation
    return Pose(rotation, translation)


def inverse(p: Pose) -> Transform:
    rt = p.rotation.T
    return Transform(rt, -rt @ p.translation)


def pose_delta(curr: Pose, prev: Pose) -> Transform:
    """Relative transform T with compose(prev, T) = curr."""
    rotation = curr.rotation @ prev.rotation.T
    translation = curr.translation - rotation @ prev.translation
    return Transform(rotation, translation)


def velocity_of(delta: Transform) -> float:
    """Translation norm of an inter-frame transform, in meters per frame."""
    return float(np.linalg.norm(delta.translation))


def twist_exp(x: Twist) -> Transform:
    """Exponential map of a twist onto a rigid transform."""
    omega = x.angular
    theta = float(np.linalg.norm(omega))
    k = skew(omega)
    k2 = k @ k
    if theta < _SMALL_ANGLE:
        rotation = np.eye(3) + k + 0.5 * k2
        v = np.eye(3) + 0.5 * k + k2 / 6.0
    else:
        rotation = Rotation.from_rotvec(np.array(omega)).as_matrix()
        theta2 = theta * theta
        v = (
            np.eye(3)
            + (1.0 - np.cos(theta)) / theta2 * k
            + (theta - np.sin(theta)) / (theta2 * theta) * k2
        )
    return Transform(rotation, v @ x.linear)


def look_at(position, target, up=(0.0, -1.0, 0.0)) -> Pose:
    """
    Camera pose at `position` whose optical axis (+z) points at `target`.

    Camera axes: x right, y down, z forward; `up` is the world direction that
    should appear upward in the image.
    """
    position = np.asarray(position, dtype=np.float64)
    forward = np.asarray(target, dtype=np.float64) - position
    norm = np.linalg.norm(forward)
    if norm == 0.0:
        raise ValueError("look_at target coincides with the camera position")
    forward /= norm
    down = -np.asarray(up, dtype=np.float64)
    right = np.cross(down, forward)
    if np.linalg.norm(right) < 1e-9:
        raise ValueError("look_at up vector is parallel to the viewing direction")
    right /= np.linalg.norm(right)
    down = np.cross(forward, right)
    return Pose(np.column_stack([right, down, forward]), position)
