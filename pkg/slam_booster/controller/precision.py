"""
Reduced-precision mode: buffers of the preprocessing and raycasting phases
are rounded through IEEE binary16.
"""

import numpy as np

from ..geometry.camera import VertexNormalMap

HALF_MAX = float(np.finfo(np.float16).max)


def quantize_reduced(buffer: np.ndarray) -> np.ndarray:
    """
    Round every value to the nearest binary16 (ties to even) and widen back to float32.

    Values beyond the half-precision range clamp to +/-65504.
    """
    values = np.clip(np.asarray(buffer, dtype=np.float32), -HALF_MAX, HALF_MAX)
    return values.astype(np.float16).astype(np.float32)


def quantize_maps(maps: VertexNormalMap) -> VertexNormalMap:
    """Quantize a vertex/normal map; normals are re-normalized after rounding."""
    vertices = quantize_reduced(maps.vertices).astype(np.float64)
    normals = quantize_reduced(maps.normals).astype(np.float64)
    length = np.linalg.norm(normals, axis=-1, keepdims=True)
    normals = np.where(maps.valid[..., None], normals / np.where(length > 0, length, 1.0), 0.0)
    return VertexNormalMap(vertices=vertices, normals=normals, valid=maps.valid, intrinsics=maps.intrinsics)
