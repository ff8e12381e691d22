"""
KinectFusion-style frame loop: preprocess, track, integrate, raycast.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from ..config.run_config import TrackingConfig, VolumeConfig
from ..controller.precision import quantize_maps, quantize_reduced
from ..core.errors import RejectedInputError
from ..core.phase_timer import PhaseDurations, phase_timer
from ..geometry.camera import CameraIntrinsics, VertexNormalMap, check_frame_shape
from ..geometry.se3 import Pose
from .icp import TrackResult, icp_track
from .knobs import KnobSettings
from .preprocessing import preprocess
from .pyramid import build_pyramid
from .raycast import RaycastResult, raycast
from .tsdf import TsdfVolume, tsdf_integrate

logger = logging.getLogger(__name__)

# Called between tracking and integration with (measured pose, track result);
# returns the pose the frame is committed with.
PoseHook = Callable[[Pose, TrackResult], Pose]


@dataclass
class FrameResult:
    index: int
    knobs: KnobSettings
    track: TrackResult
    measured_pose: Pose
    pose: Pose
    integrated: bool
    durations: PhaseDurations


class KinectFusion:
    """
    One dense-SLAM pipeline instance. Owns its volume and reference view; not
    shareable between threads.
    """

    def __init__(
        self,
        intrinsics: CameraIntrinsics,
        volume: Optional[VolumeConfig] = None,
        tracking: Optional[TrackingConfig] = None,
        initial_pose: Optional[Pose] = None,
        reduced_precision: bool = False,
    ):
        self.intrinsics = intrinsics
        self.volume_config = volume or VolumeConfig()
        self.tracking = tracking or TrackingConfig()
        self.initial_pose = initial_pose or Pose.identity()
        self.reduced_precision = reduced_precision

        self.volume = TsdfVolume.from_config(self.volume_config)
        self.pose = self.initial_pose
        self.frame_index = 0
        self.reference: Optional[RaycastResult] = None
        self.reference_pose: Optional[Pose] = None
        self.reference_csr: Optional[int] = None

    # === PHASES ===

    def _preprocess(self, raw: np.ndarray, knobs: KnobSettings) -> np.ndarray:
        depth = preprocess(raw, knobs)
        if self.reduced_precision:
            depth = quantize_reduced(depth)
        return depth

    def _raycast(self, pose: Pose, intr: CameraIntrinsics) -> RaycastResult:
        result = raycast(self.volume, pose, intr)
        if self.reduced_precision:
            result = RaycastResult(maps=quantize_maps(result.maps), depth=quantize_reduced(result.depth))
        return result

    def _reference_at(self, csr: int) -> RaycastResult:
        """The reference view resampled to the current frame's csr."""
        ref = self.reference
        if csr == self.reference_csr:
            return ref
        if csr > self.reference_csr and csr % self.reference_csr == 0:
            k = csr // self.reference_csr
            maps = ref.maps.subsample(k)
            return RaycastResult(maps=maps, depth=np.ascontiguousarray(ref.depth[::k, ::k]))
        # finer than the stored view: render it again at the new resolution
        self.reference = self._raycast(self.reference_pose, self.intrinsics.scaled(csr))
        self.reference_csr = csr
        return self.reference

    def _reference_pyramid(self, ref: RaycastResult) -> List[VertexNormalMap]:
        levels = build_pyramid(ref.depth, ref.maps.intrinsics, self.tracking.pyramid_levels)
        levels[0] = ref.maps
        return levels

    # === FRAME LOOP ===

    def process_frame(
        self,
        raw: np.ndarray,
        knobs: KnobSettings,
        correct: Optional[PoseHook] = None,
        durations: Optional[PhaseDurations] = None,
    ) -> FrameResult:
        """
        Run one frame through every phase with the given knobs.

        Frame 0 bootstraps at the initial pose. Untracked frames keep the
        previous pose and skip integration and raycasting. Phase wall-clock
        times are added to `durations`.

        Raises:
            DimensionMismatchError: the frame does not match the intrinsics
            RejectedInputError: the knobs ask for a different volume resolution or
                truncation than the volume was built with (both are fixed for a run)
        """
        check_frame_shape(raw, self.intrinsics)
        if knobs.vr != self.volume.vr or not np.isclose(knobs.mu, self.volume.mu):
            raise RejectedInputError(
                f"knobs ask for vr={knobs.vr} mu={knobs.mu}, volume has vr={self.volume.vr} mu={self.volume.mu}",
                "KinectFusion",
            )
        durations = durations if durations is not None else PhaseDurations()
        index = self.frame_index
        intr = self.intrinsics.scaled(knobs.csr)
        levels = self.tracking.pyramid_levels

        with phase_timer(durations, "preprocess"):
            depth = self._preprocess(raw, knobs)

        if self.reference is None:
            track = TrackResult(self.pose, 0.0, (0,) * levels, 1.0, True)
        elif index % knobs.tr:
            track = TrackResult(self.pose, 0.0, (0,) * levels, 1.0, True)
        else:
            with phase_timer(durations, "track"):
                pyr_cur = build_pyramid(depth, intr, levels)
                ref = self._reference_at(knobs.csr)
                track = icp_track(
                    pyr_cur,
                    self._reference_pyramid(ref),
                    init=self.pose,
                    knobs=knobs,
                    ref_pose=self.reference_pose,
                    cfg=self.tracking,
                )
            if not track.tracked:
                logger.debug(
                    f"frame {index}: untracked (inliers {track.inlier_fraction:.2f}, "
                    f"rms {track.rms_residual:.4f}, singular {track.singular})"
                )

        measured = track.pose if track.tracked else self.pose
        pose = correct(measured, track) if correct is not None else measured
        self.pose = pose

        integrated = False
        if track.tracked:
            if index % knobs.ir == 0:
                with phase_timer(durations, "integrate"):
                    tsdf_integrate(self.volume, depth, pose, intr)
                integrated = True
            with phase_timer(durations, "raycast"):
                self.reference = self._raycast(pose, intr)
                self.reference_pose = pose
                self.reference_csr = knobs.csr

        self.frame_index += 1
        return FrameResult(
            index=index,
            knobs=knobs,
            track=track,
            measured_pose=measured,
            pose=pose,
            integrated=integrated,
            durations=durations,
        )
