"""
The dense-SLAM pipeline: preprocessing, ICP tracking, TSDF fusion and raycasting.

Usage:
    from slam_booster.pipeline import KinectFusion, KnobSettings

    fusion = KinectFusion(intrinsics, initial_pose=start)
    result = fusion.process_frame(raw_frame, KnobSettings.accurate())
"""

from .icp import TrackResult, icp_track
from .kinfu import FrameResult, KinectFusion
from .knobs import KnobSettings
from .preprocessing import bilateral_filter, preprocess, stride_subsample
from .pyramid import build_pyramid, compute_normals, downsample_depth
from .raycast import RaycastResult, raycast
from .tsdf import TsdfVolume, tsdf_integrate

__all__ = [
    "FrameResult",
    "KinectFusion",
    "KnobSettings",
    "RaycastResult",
    "TrackResult",
    "TsdfVolume",
    "bilateral_filter",
    "build_pyramid",
    "compute_normals",
    "downsample_depth",
    "icp_track",
    "preprocess",
    "raycast",
    "stride_subsample",
    "tsdf_integrate",
]
