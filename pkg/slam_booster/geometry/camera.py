"""
Pinhole camera model and the frame containers passed between pipeline phases.

Camera axes: x right, y down, z forward (optical axis). Depth values are
z-depths, not ray lengths.

Frame containers are plain numpy arrays:
    DepthFrameRaw: (H, W) uint16, millimeters, 0 = invalid
    DepthFrame:    (H, W) float32, meters, 0.0 = invalid
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..core.errors import DimensionMismatchError, RejectedInputError

DEFAULT_WIDTH = 320
DEFAULT_HEIGHT = 240
DEFAULT_FOCAL = 277.0


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics in pixels."""

    fx: float = DEFAULT_FOCAL
    fy: float = DEFAULT_FOCAL
    cx: float = (DEFAULT_WIDTH - 1) / 2.0
    cy: float = (DEFAULT_HEIGHT - 1) / 2.0
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise RejectedInputError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}", "CameraIntrinsics")
        if self.width <= 0 or self.height <= 0:
            raise RejectedInputError(f"image size must be positive, got {self.width}x{self.height}", "CameraIntrinsics")

    @property
    def shape(self) -> Tuple[int, int]:
        """(rows, cols) of frames taken with these intrinsics."""
        return self.height, self.width

    def scaled(self, k: int) -> "CameraIntrinsics":
        """
        Intrinsics of a frame stride-subsampled by k (pixel (k*i, k*j) kept).

        All pixel quantities are divided by k; the image size must be divisible.
        """
        if k == 1:
            return self
        if self.width % k or self.height % k:
            raise RejectedInputError(
                f"{self.width}x{self.height} frame is not divisible by downsample factor {k}", "CameraIntrinsics"
            )
        return CameraIntrinsics(
            fx=self.fx / k,
            fy=self.fy / k,
            cx=self.cx / k,
            cy=self.cy / k,
            width=self.width // k,
            height=self.height // k,
        )

    def half(self) -> "CameraIntrinsics":
        """Intrinsics of the next pyramid level (2x2 block averaging, trailing odd row/column dropped)."""
        return CameraIntrinsics(
            fx=self.fx / 2.0,
            fy=self.fy / 2.0,
            cx=(self.cx - 0.5) / 2.0,
            cy=(self.cy - 0.5) / 2.0,
            width=self.width // 2,
            height=self.height // 2,
        )

    def pixel_grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Pixel-center coordinates (u, v), each of shape (H, W)."""
        u, v = np.meshgrid(
            np.arange(self.width, dtype=np.float64), np.arange(self.height, dtype=np.float64)
        )
        return u, v

    def ray_directions(self) -> np.ndarray:
        """Camera-frame ray directions with z = 1, shape (H, W, 3)."""
        u, v = self.pixel_grid()
        return np.stack([(u - self.cx) / self.fx, (v - self.cy) / self.fy, np.ones_like(u)], axis=-1)

    def back_project(self, depth: np.ndarray) -> np.ndarray:
        """Camera-frame points for a depth image in meters, shape (H, W, 3)."""
        check_frame_shape(depth, self)
        return self.ray_directions() * np.asarray(depth, dtype=np.float64)[..., None]

    def project(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Continuous pixel coordinates (u, v) of camera-frame points (..., 3)."""
        z = points[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = self.fx * points[..., 0] / z + self.cx
            v = self.fy * points[..., 1] / z + self.cy
        return u, v

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fx": self.fx,
            "fy": self.fy,
            "cx": self.cx,
            "cy": self.cy,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CameraIntrinsics":
        return cls(
            fx=float(data["fx"]),
            fy=float(data["fy"]),
            cx=float(data["cx"]),
            cy=float(data["cy"]),
            width=int(data["width"]),
            height=int(data["height"]),
        )


def check_frame_shape(frame: np.ndarray, intr: CameraIntrinsics) -> None:
    if frame.shape != intr.shape:
        raise DimensionMismatchError(
            f"frame shape {frame.shape} does not match intrinsics {intr.height}x{intr.width}", "camera"
        )


def depth_to_meters(raw: np.ndarray) -> np.ndarray:
    """DepthFrameRaw (uint16 mm) to DepthFrame (float32 m)."""
    if raw.dtype != np.uint16:
        raise RejectedInputError(f"raw depth frames are uint16, got {raw.dtype}", "camera")
    return raw.astype(np.float32) / np.float32(1000.0)


@dataclass
class VertexNormalMap:
    """
    Per-pixel camera-frame vertices and unit normals.

    Arrays are float64 of shape (H, W, 3); `valid` is a boolean (H, W) mask.
    Invalid pixels hold zeros.
    """

    vertices: np.ndarray
    normals: np.ndarray
    valid: np.ndarray
    intrinsics: CameraIntrinsics

    @property
    def shape(self) -> Tuple[int, int]:
        return self.valid.shape

    @property
    def valid_count(self) -> int:
        return int(self.valid.sum())

    @classmethod
    def empty(cls, intr: CameraIntrinsics) -> "VertexNormalMap":
        h, w = intr.shape
        return cls(
            vertices=np.zeros((h, w, 3), dtype=np.float64),
            normals=np.zeros((h, w, 3), dtype=np.float64),
            valid=np.zeros((h, w), dtype=bool),
            intrinsics=intr,
        )

    def subsample(self, k: int) -> "VertexNormalMap":
        """Stride-subsampled view matching a frame preprocessed with csr multiplied by k."""
        if k == 1:
            return self
        intr = self.intrinsics.scaled(k)
        return VertexNormalMap(
            vertices=np.ascontiguousarray(self.vertices[::k, ::k]),
            normals=np.ascontiguousarray(self.normals[::k, ::k]),
            valid=np.ascontiguousarray(self.valid[::k, ::k]),
            intrinsics=intr,
        )
