"""
Truncated signed distance volume and projective integration.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..config.run_config import VolumeConfig
from ..core.errors import RejectedInputError
from ..geometry.camera import CameraIntrinsics, check_frame_shape
from ..geometry.se3 import Pose

logger = logging.getLogger(__name__)


class TsdfVolume:
    """
    A cube of vr^3 voxels. Voxel (i, j, k) is centered at
    origin + (index + 0.5) * voxel_size, indexed [x, y, z].

    Untouched voxels hold tsdf = 1 and weight = 0.
    """

    def __init__(
        self,
        vr: int = 64,
        edge: float = 5.0,
        mu: float = 0.1,
        origin: Sequence[float] = (-2.5, -2.5, -2.5),
        max_weight: float = 100.0,
    ):
        if vr < 8:
            raise RejectedInputError(f"vr must be at least 8, got {vr}", "tsdf")
        if not (edge > 0 and mu > 0 and max_weight > 0):
            raise RejectedInputError("edge, mu and max_weight must be positive", "tsdf")
        self.vr = int(vr)
        self.edge = float(edge)
        self.mu = float(mu)
        self.origin = np.asarray(origin, dtype=np.float64).reshape(3)
        self.max_weight = float(max_weight)
        self.tsdf = np.ones((self.vr,) * 3, dtype=np.float32)
        self.weight = np.zeros((self.vr,) * 3, dtype=np.float32)
        self._centers: Optional[np.ndarray] = None

    @classmethod
    def from_config(cls, cfg: VolumeConfig) -> "TsdfVolume":
        return cls(vr=cfg.vr, edge=cfg.edge, mu=cfg.mu, origin=cfg.origin, max_weight=cfg.max_weight)

    @property
    def voxel_size(self) -> float:
        return self.edge / self.vr

    @property
    def bounds(self):
        return self.origin, self.origin + self.edge

    def voxel_centers(self) -> np.ndarray:
        """World coordinates of all voxel centers, shape (vr^3, 3), in tsdf.ravel() order."""
        if self._centers is None:
            axis = (np.arange(self.vr, dtype=np.float64) + 0.5) * self.voxel_size
            gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
            self._centers = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1) + self.origin
        return self._centers

    def to_grid_coords(self, points: np.ndarray) -> np.ndarray:
        """Continuous voxel-index coordinates of world points (..., 3)."""
        return (points - self.origin) / self.voxel_size - 0.5

    def observed(self) -> np.ndarray:
        return self.weight > 0

    def copy(self) -> "TsdfVolume":
        other = TsdfVolume(self.vr, self.edge, self.mu, self.origin, self.max_weight)
        other.tsdf = self.tsdf.copy()
        other.weight = self.weight.copy()
        other._centers = self._centers
        return other

    def __repr__(self):
        return (
            f"TsdfVolume(vr={self.vr}, edge={self.edge}, mu={self.mu}, "
            f"observed={int(self.observed().sum())})"
        )


def tsdf_integrate(
    vol: TsdfVolume,
    frame: np.ndarray,
    pose: Pose,
    intr: CameraIntrinsics,
    weight: float = 1.0,
) -> TsdfVolume:
    """
    Fuse a metric depth frame taken at `pose` into the volume (in place).

    Every voxel that projects onto a valid pixel with measured depth d gets
    sdf = d - z (z = voxel camera depth); voxels with sdf < -mu are left alone.
    The clamped sdf/mu is merged by a weighted running average and the weight
    is capped at the volume's max_weight. Returns the same volume.
    """
    check_frame_shape(frame, intr)
    centers = vol.voxel_centers()
    cam = (centers - pose.translation) @ pose.rotation
    z = cam[:, 2]
    front = z > 1e-6

    u = np.full(z.shape, -1, dtype=np.int64)
    v = np.full(z.shape, -1, dtype=np.int64)
    u[front] = np.rint(intr.fx * cam[front, 0] / z[front] + intr.cx).astype(np.int64)
    v[front] = np.rint(intr.fy * cam[front, 1] / z[front] + intr.cy).astype(np.int64)
    visible = front & (u >= 0) & (u < intr.width) & (v >= 0) & (v < intr.height)

    idx = np.nonzero(visible)[0]
    depth = np.asarray(frame, dtype=np.float64)[v[idx], u[idx]]
    sdf = depth - z[idx]
    keep = (depth > 0) & (sdf >= -vol.mu)
    idx, sdf = idx[keep], sdf[keep]

    value = np.clip(sdf / vol.mu, -1.0, 1.0)
    flat_tsdf = vol.tsdf.reshape(-1)
    flat_weight = vol.weight.reshape(-1)
    old_w = flat_weight[idx].astype(np.float64)
    old_t = flat_tsdf[idx].astype(np.float64)
    new_w = old_w + weight
    flat_tsdf[idx] = ((old_t * old_w + value * weight) / new_w).astype(np.float32)
    flat_weight[idx] = np.minimum(new_w, vol.max_weight).astype(np.float32)
    logger.debug(f"integrated {len(idx)} voxels")
    return vol
