"""
Image pyramids of vertex and normal maps for coarse-to-fine tracking.

Level 0 is the input resolution; every further level halves it by averaging
the valid pixels of each 2x2 block (a trailing odd row or column is dropped).
"""

from typing import List

import numpy as np

from ..geometry.camera import CameraIntrinsics, VertexNormalMap, check_frame_shape

PYRAMID_LEVELS = 3


def downsample_depth(depth: np.ndarray) -> np.ndarray:
    """2x2 average over valid pixels; a block with no valid pixel stays invalid."""
    height, width = depth.shape
    h2, w2 = height // 2, width // 2
    blocks = np.asarray(depth[: 2 * h2, : 2 * w2], dtype=np.float64).reshape(h2, 2, w2, 2)
    valid = blocks > 0
    count = valid.sum(axis=(1, 3))
    total = np.where(valid, blocks, 0.0).sum(axis=(1, 3))
    out = np.where(count > 0, total / np.maximum(count, 1), 0.0)
    return out.astype(np.float32)


def compute_normals(vertices: np.ndarray, valid: np.ndarray):
    """
    Unit normals from the cross product of the horizontal and vertical
    central differences (left to right, up to down neighbour), flipped to
    face the camera.

    Returns (normals, valid) where a pixel is valid only if it and its four
    neighbours carry a vertex. The outermost rows and columns are never valid.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    normals = np.zeros_like(vertices)
    ok = np.zeros(valid.shape, dtype=bool)
    if min(valid.shape) < 3:
        return normals, ok

    center = vertices[1:-1, 1:-1]
    dx = vertices[1:-1, 2:] - vertices[1:-1, :-2]
    dy = vertices[2:, 1:-1] - vertices[:-2, 1:-1]
    n = np.cross(dx, dy)
    length = np.linalg.norm(n, axis=-1)
    inner = (
        valid[1:-1, 1:-1]
        & valid[1:-1, 2:]
        & valid[1:-1, :-2]
        & valid[2:, 1:-1]
        & valid[:-2, 1:-1]
        & (length > 1e-12)
    )
    n = n / np.where(length > 0, length, 1.0)[..., None]
    facing_away = np.einsum("ijk,ijk->ij", n, center) > 0
    n = np.where(facing_away[..., None], -n, n)

    normals[1:-1, 1:-1] = np.where(inner[..., None], n, 0.0)
    ok[1:-1, 1:-1] = inner
    return normals, ok


def vertex_normal_map(depth: np.ndarray, intr: CameraIntrinsics) -> VertexNormalMap:
    """Back-project a metric depth frame and estimate normals."""
    check_frame_shape(depth, intr)
    valid = depth > 0
    vertices = intr.back_project(depth)
    normals, ok = compute_normals(vertices, valid)
    vertices = np.where(ok[..., None], vertices, 0.0)
    return VertexNormalMap(vertices=vertices, normals=normals, valid=ok, intrinsics=intr)


def build_pyramid(depth: np.ndarray, intr: CameraIntrinsics, levels: int = PYRAMID_LEVELS) -> List[VertexNormalMap]:
    """Vertex/normal maps for `levels` pyramid levels, finest first."""
    maps = []
    level_depth = depth
    level_intr = intr
    for level in range(levels):
        if level > 0:
            level_depth = downsample_depth(level_depth)
            level_intr = level_intr.half()
        maps.append(vertex_normal_map(level_depth, level_intr))
    return maps
