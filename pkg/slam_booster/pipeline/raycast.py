"""
Raycasting the TSDF volume into a synthetic view.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.ndimage import map_coordinates

from ..geometry.camera import CameraIntrinsics, VertexNormalMap
from ..geometry.se3 import Pose
from .tsdf import TsdfVolume

logger = logging.getLogger(__name__)

STEP_FRACTION = 0.5
MIN_OBSERVED = 1e-6


@dataclass
class RaycastResult:
    maps: VertexNormalMap
    depth: np.ndarray  # float32 meters, 0 = no surface


class TsdfField:
    """
    Trilinear tsdf over the observed voxels of a volume.

    Untouched voxels (weight 0) are left out of the interpolation and the
    remaining corner weights renormalized, so the thin band of observed
    negative values behind a surface is not pulled back towards +1. A point
    with no observed corner, or outside the volume, reads as free space (1).
    """

    def __init__(self, vol: TsdfVolume):
        observed = vol.weight > 0
        self.vol = vol
        self._values = np.where(observed, vol.tsdf, 0.0).astype(np.float64)
        self._observed = observed.astype(np.float64)

    def _interpolate(self, grid: np.ndarray, coords: np.ndarray) -> np.ndarray:
        return map_coordinates(grid, coords, order=1, mode="constant", cval=0.0, prefilter=False)

    def sample(self, points: np.ndarray) -> np.ndarray:
        coords = self.vol.to_grid_coords(points).T
        total = self._interpolate(self._values, coords)
        share = self._interpolate(self._observed, coords)
        out = np.ones(len(points))
        seen = share > MIN_OBSERVED
        out[seen] = total[seen] / share[seen]
        return out

    def gradient(self, points: np.ndarray) -> np.ndarray:
        """Central-difference gradient, one voxel apart."""
        h = self.vol.voxel_size
        grad = np.empty_like(points)
        for axis in range(3):
            offset = np.zeros(3)
            offset[axis] = h
            grad[:, axis] = (self.sample(points + offset) - self.sample(points - offset)) / (2.0 * h)
        return grad


def sample_tsdf(vol: TsdfVolume, points: np.ndarray) -> np.ndarray:
    """Trilinear tsdf at world points (N, 3) over observed voxels; unobserved space reads as 1."""
    return TsdfField(vol).sample(points)


def tsdf_gradient(vol: TsdfVolume, points: np.ndarray) -> np.ndarray:
    return TsdfField(vol).gradient(points)


def _slab_interval(origin: np.ndarray, dirs: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Entry and exit ray parameters against an axis-aligned box (entry clamped at 0)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / dirs
        t0 = (lo - origin) * inv
        t1 = (hi - origin) * inv
    t_near = np.nanmax(np.minimum(t0, t1), axis=1)
    t_far = np.nanmin(np.maximum(t0, t1), axis=1)
    return np.maximum(t_near, 0.0), t_far


def raycast(vol: TsdfVolume, pose: Pose, intr: CameraIntrinsics, step_fraction: float = STEP_FRACTION) -> RaycastResult:
    """
    March every pixel ray through the volume at step_fraction * voxel_size.

    A pixel gets a surface at the first positive-to-negative tsdf transition
    whose gradient normal faces the camera; the crossing is placed by linear
    interpolation between the two samples. Pixels without one are invalid.
    """
    height, width = intr.shape
    dirs_cam = intr.ray_directions().reshape(-1, 3)
    dirs_cam /= np.linalg.norm(dirs_cam, axis=1, keepdims=True)
    dirs_world = dirs_cam @ pose.rotation.T
    origin = np.asarray(pose.translation, dtype=np.float64)

    lo, hi = vol.bounds
    t_near, t_far = _slab_interval(origin, dirs_world, lo, hi)
    step = step_fraction * vol.voxel_size
    field = TsdfField(vol)

    n = dirs_cam.shape[0]
    hit_t = np.full(n, np.nan)
    hit_normal = np.zeros((n, 3))

    active = np.nonzero(t_near < t_far)[0]
    t = t_near[active]
    prev = field.sample(origin + t[:, None] * dirs_world[active])

    while active.size:
        t_next = t + step
        cur = field.sample(origin + t_next[:, None] * dirs_world[active])
        crossing = (prev > 0) & (cur < 0)
        accepted = np.zeros(active.size, dtype=bool)
        if crossing.any():
            ci = np.nonzero(crossing)[0]
            frac = prev[ci] / (prev[ci] - cur[ci])
            t_hit = t[ci] + step * frac
            rays = active[ci]
            points = origin + t_hit[:, None] * dirs_world[rays]
            grad = field.gradient(points)
            norm = np.linalg.norm(grad, axis=1)
            normal = grad / np.where(norm > 0, norm, 1.0)[:, None]
            facing = (norm > 0) & (np.einsum("ij,ij->i", normal, dirs_world[rays]) < 0)
            hit_t[rays[facing]] = t_hit[facing]
            hit_normal[rays[facing]] = normal[facing]
            accepted[ci[facing]] = True

        keep = ~accepted & (t_next < t_far[active])
        active = active[keep]
        t = t_next[keep]
        prev = cur[keep]

    valid = np.isfinite(hit_t)
    vertices = np.zeros((n, 3))
    normals = np.zeros((n, 3))
    vertices[valid] = dirs_cam[valid] * hit_t[valid, None]
    normals[valid] = hit_normal[valid] @ pose.rotation
    depth = np.where(valid, vertices[:, 2], 0.0).astype(np.float32)

    maps = VertexNormalMap(
        vertices=vertices.reshape(height, width, 3),
        normals=normals.reshape(height, width, 3),
        valid=valid.reshape(height, width),
        intrinsics=intr,
    )
    logger.debug(f"raycast: {int(valid.sum())}/{n} pixels hit")
    return RaycastResult(maps=maps, depth=depth.reshape(height, width))
