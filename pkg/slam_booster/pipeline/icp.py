"""
Coarse-to-fine point-to-plane ICP with projective data association.

The current frame's vertices are moved into the world with the pose estimate
and projected into the reference camera; the reference vertex under the
projected pixel is the correspondence. Each iteration solves the 6x6 normal
equations for a twist and left-applies its exponential to the estimate.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.run_config import TrackingConfig
from ..core.errors import DegenerateGeometryError
from ..geometry.camera import VertexNormalMap
from ..geometry.se3 import Pose, Twist, compose, twist_exp
from .knobs import KnobSettings

logger = logging.getLogger(__name__)

MIN_CORRESPONDENCES = 6


@dataclass
class TrackResult:
    pose: Pose
    rms_residual: float
    iterations_used: Tuple[int, ...]
    inlier_fraction: float
    tracked: bool
    singular: bool = False
    residual_history: Tuple[Tuple[float, ...], ...] = field(default_factory=tuple)

    @classmethod
    def untracked(cls, pose: Pose, levels: int, singular: bool = False) -> "TrackResult":
        return cls(
            pose=pose,
            rms_residual=float("inf"),
            iterations_used=(0,) * levels,
            inlier_fraction=0.0,
            tracked=False,
            singular=singular,
            residual_history=((),) * levels,
        )


@dataclass
class Correspondences:
    points: np.ndarray  # current vertices in world, (M, 3)
    ref_points: np.ndarray  # matched reference vertices in world, (M, 3)
    ref_normals: np.ndarray  # matched reference normals in world, (M, 3)
    candidates: int  # current vertices that landed on a valid reference pixel

    @property
    def count(self) -> int:
        return len(self.points)

    def residuals(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.points - self.ref_points, self.ref_normals)

    def rms(self) -> float:
        if self.count == 0:
            return float("inf")
        r = self.residuals()
        return float(np.sqrt(np.mean(r * r)))


def associate(
    cur: VertexNormalMap,
    ref: VertexNormalMap,
    pose: Pose,
    ref_pose: Pose,
    cfg: TrackingConfig,
) -> Correspondences:
    """
    Projective association of the current map (placed at `pose`) against the reference map.

    Points that project outside the reference view or onto a reference hole
    are not candidates; candidates farther than max_distance or with normals
    more than max_normal_angle_deg apart are rejected.
    """
    vertices = cur.vertices[cur.valid]
    normals = cur.normals[cur.valid]
    points = vertices @ pose.rotation.T + pose.translation
    point_normals = normals @ pose.rotation.T

    in_ref = (points - ref_pose.translation) @ ref_pose.rotation
    u, v = ref.intrinsics.project(in_ref)
    height, width = ref.shape
    in_front = in_ref[:, 2] > 0
    ok = in_front & np.isfinite(u) & np.isfinite(v)
    ui = np.full(u.shape, -1, dtype=np.int64)
    vi = np.full(v.shape, -1, dtype=np.int64)
    ui[ok] = np.rint(u[ok]).astype(np.int64)
    vi[ok] = np.rint(v[ok]).astype(np.int64)
    ok &= (ui >= 0) & (ui < width) & (vi >= 0) & (vi < height)
    ok[ok] = ref.valid[vi[ok], ui[ok]]

    idx = np.nonzero(ok)[0]
    ref_points = ref.vertices[vi[idx], ui[idx]] @ ref_pose.rotation.T + ref_pose.translation
    ref_normals = ref.normals[vi[idx], ui[idx]] @ ref_pose.rotation.T
    points = points[idx]

    distance = np.linalg.norm(points - ref_points, axis=1)
    cos_angle = np.einsum("ij,ij->i", point_normals[idx], ref_normals)
    keep = (distance <= cfg.max_distance) & (cos_angle >= np.cos(np.radians(cfg.max_normal_angle_deg)))
    return Correspondences(points[keep], ref_points[keep], ref_normals[keep], int(len(idx)))


def solve_increment(corr: Correspondences, max_condition: float) -> np.ndarray:
    """
    Gauss-Newton step for the point-to-plane error.

    Raises:
        DegenerateGeometryError: too few correspondences or ill-conditioned normal equations
    """
    if corr.count < MIN_CORRESPONDENCES:
        raise DegenerateGeometryError(f"only {corr.count} correspondences", "icp")
    jac = np.hstack([corr.ref_normals, np.cross(corr.points, corr.ref_normals)])
    residuals = corr.residuals()
    # fixed-order reduction keeps runs reproducible
    normal_matrix = jac.T @ jac
    rhs = -(jac.T @ residuals)
    condition = np.linalg.cond(normal_matrix)
    if not np.isfinite(condition) or condition > max_condition:
        raise DegenerateGeometryError(f"normal equations are singular (cond={condition:.3g})", "icp")
    return np.linalg.solve(normal_matrix, rhs)


def icp_track(
    pyr_cur: Sequence[VertexNormalMap],
    pyr_ref: Sequence[VertexNormalMap],
    init: Pose,
    knobs: KnobSettings,
    ref_pose: Optional[Pose] = None,
    cfg: Optional[TrackingConfig] = None,
) -> TrackResult:
    """
    Estimate the current camera pose against a reference pyramid.

    Args:
        pyr_cur: current frame pyramid, finest first (camera frame)
        pyr_ref: reference pyramid, finest first (reference camera frame)
        init: initial pose estimate
        knobs: supplies the per-level iteration caps and early-exit threshold
        ref_pose: pose of the reference camera (defaults to init)
        cfg: association and acceptance thresholds
    """
    cfg = cfg or TrackingConfig()
    ref_pose = ref_pose if ref_pose is not None else init
    levels = min(len(pyr_cur), len(pyr_ref), len(knobs.pd))

    pose = init
    iterations: List[int] = [0] * levels
    history: List[Tuple[float, ...]] = [()] * levels
    try:
        for level in reversed(range(levels)):
            cur, ref = pyr_cur[level], pyr_ref[level]
            level_history = []
            for _ in range(knobs.pd[level]):
                corr = associate(cur, ref, pose, ref_pose, cfg)
                if corr.count < MIN_CORRESPONDENCES and level > 0:
                    logger.debug(f"level {level}: {corr.count} correspondences, skipping level")
                    break
                level_history.append(corr.rms())
                xi = solve_increment(corr, cfg.max_condition)
                pose = compose(pose, twist_exp(Twist.from_vector(xi)))
                iterations[level] += 1
                if float(xi @ xi) < knobs.icp_threshold:
                    break
            history[level] = tuple(level_history)
    except DegenerateGeometryError as e:
        logger.debug(f"tracking lost: {e}")
        result = TrackResult.untracked(init, levels, singular=True)
        result.iterations_used = tuple(iterations)
        result.residual_history = tuple(history)
        return result

    final = associate(pyr_cur[0], pyr_ref[0], pose, ref_pose, cfg)
    inlier_fraction = final.count / final.candidates if final.candidates else 0.0
    rms = final.rms()
    tracked = final.count >= MIN_CORRESPONDENCES and inlier_fraction >= cfg.min_inlier and rms <= cfg.max_rms
    return TrackResult(
        pose=pose,
        rms_residual=rms,
        iterations_used=tuple(iterations),
        inlier_fraction=float(inlier_fraction),
        tracked=bool(tracked),
        singular=False,
        residual_history=tuple(history),
    )
