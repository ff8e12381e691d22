"""
Preprocessing phase: unit conversion, csr downsampling and bilateral filtering.
"""

import numpy as np

from ..core.errors import RejectedInputError
from ..geometry.camera import depth_to_meters
from .knobs import KnobSettings

FILTER_RADIUS = 2
SIGMA_SPATIAL = 2.0
SIGMA_RANGE = 0.1


def stride_subsample(frame: np.ndarray, csr: int) -> np.ndarray:
    """Keep pixel (csr*i, csr*j); both dimensions must be divisible by csr."""
    height, width = frame.shape
    if height % csr or width % csr:
        raise RejectedInputError(f"{width}x{height} frame is not divisible by csr={csr}", "preprocess")
    if csr == 1:
        return frame
    return np.ascontiguousarray(frame[::csr, ::csr])


def bilateral_filter(
    depth: np.ndarray,
    radius: int = FILTER_RADIUS,
    sigma_spatial: float = SIGMA_SPATIAL,
    sigma_range: float = SIGMA_RANGE,
) -> np.ndarray:
    """
    Edge-preserving smoothing of a metric depth frame.

    Only valid (non-zero) neighbours contribute and invalid pixels stay 0.
    The result is written as center + weighted mean offset, so constant
    regions come out bit-exact.
    """
    depth = np.asarray(depth, dtype=np.float64)
    valid = depth > 0
    height, width = depth.shape
    padded = np.pad(depth, radius, mode="constant")
    padded_valid = np.pad(valid, radius, mode="constant")

    weight_sum = np.zeros_like(depth)
    offset_sum = np.zeros_like(depth)
    inv_2ss = 1.0 / (2.0 * sigma_spatial * sigma_spatial)
    inv_2sr = 1.0 / (2.0 * sigma_range * sigma_range)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            rows = slice(radius + dy, radius + dy + height)
            cols = slice(radius + dx, radius + dx + width)
            neighbour = padded[rows, cols]
            diff = neighbour - depth
            w = np.exp(-(dx * dx + dy * dy) * inv_2ss - diff * diff * inv_2sr)
            w = np.where(padded_valid[rows, cols], w, 0.0)
            weight_sum += w
            offset_sum += w * diff

    # the center pixel always contributes weight 1 when valid
    out = np.where(valid, depth + offset_sum / np.where(valid, weight_sum, 1.0), 0.0)
    return out.astype(np.float32)


def preprocess(raw: np.ndarray, knobs: KnobSettings) -> np.ndarray:
    """
    Raw frame (uint16 mm) to the filtered metric frame the tracker consumes.

    Raises:
        RejectedInputError: frame dimensions not divisible by knobs.csr
    """
    meters = depth_to_meters(stride_subsample(raw, knobs.csr))
    return bilateral_filter(meters)


def raw_view(raw: np.ndarray, csr: int) -> np.ndarray:
    """Unfiltered metric view of a raw frame at a given csr (what surface detection samples)."""
    return depth_to_meters(stride_subsample(raw, csr))
