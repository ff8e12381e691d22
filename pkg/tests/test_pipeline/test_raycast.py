"""
Tests for raycasting the TSDF volume.
"""

import numpy as np

from slam_booster.geometry.se3 import Pose
from slam_booster.pipeline.knobs import KnobSettings
from slam_booster.pipeline.preprocessing import preprocess
from slam_booster.pipeline.raycast import raycast, sample_tsdf
from slam_booster.pipeline.tsdf import TsdfVolume, tsdf_integrate
from slam_booster.simulation.renderer import render_depth


class TestRaycast:
    """Test cases for raycast."""

    def test_empty_volume_has_no_surface(self, small_intrinsics):
        result = raycast(TsdfVolume(vr=16), Pose.identity(), small_intrinsics)
        assert result.maps.valid_count == 0
        assert np.all(result.depth == 0)

    def test_wall_round_trip(self, wall_scene, intrinsics):
        pose = Pose.identity()
        depth = preprocess(render_depth(wall_scene, pose, intrinsics), KnobSettings())
        vol = TsdfVolume(vr=64)
        tsdf_integrate(vol, depth, pose, intrinsics)
        result = raycast(vol, pose, intrinsics)

        valid = result.maps.valid & (depth > 0)
        assert valid.mean() > 0.8
        error = np.abs(result.depth[valid] - depth[valid])
        assert error.mean() < vol.voxel_size

        # rays near the frustum edge sample unobserved voxels; judge normals in the interior
        inner = valid[40:-40, 40:-40]
        normals = result.maps.normals[40:-40, 40:-40][inner]
        angles = np.degrees(np.arccos(np.clip(normals @ np.array([0.0, 0.0, -1.0]), -1.0, 1.0)))
        assert np.median(angles) < 5.0
        assert np.mean(angles < 5.0) > 0.95

    def test_thin_negative_band_is_not_skipped(self, small_intrinsics):
        vol = TsdfVolume(vr=64)
        # one observed voxel layer behind the wall; the next layer sits beyond -mu and stays untouched
        center = vol.origin[2] + 57.5 * vol.voxel_size
        wall = center - 0.024
        frame = np.full(small_intrinsics.shape, wall, dtype=np.float32)
        tsdf_integrate(vol, frame, Pose.identity(), small_intrinsics)
        result = raycast(vol, Pose.identity(), small_intrinsics)

        inner = result.maps.valid[10:-10, 10:-10]
        assert inner.mean() > 0.95
        depth = result.depth[10:-10, 10:-10][inner]
        assert np.abs(depth - wall).mean() < 0.01

    def test_unobserved_voxels_are_left_out_of_sampling(self):
        vol = TsdfVolume(vr=8, edge=8.0, origin=(0.0, 0.0, 0.0))
        vol.tsdf[3, 3, 3] = -0.5
        vol.weight[3, 3, 3] = 1.0
        # halfway to an untouched neighbour the observed value still holds
        np.testing.assert_allclose(sample_tsdf(vol, np.array([[4.0, 3.5, 3.5]])), [-0.5])

    def test_outside_volume_reads_free_space(self):
        vol = TsdfVolume(vr=8)
        np.testing.assert_array_equal(sample_tsdf(vol, np.array([[10.0, 0.0, 0.0]])), [1.0])

    def test_vertices_lie_on_rays(self, wall_scene, small_intrinsics):
        pose = Pose.identity()
        depth = preprocess(render_depth(wall_scene, pose, small_intrinsics), KnobSettings())
        vol = TsdfVolume(vr=32)
        tsdf_integrate(vol, depth, pose, small_intrinsics)
        maps = raycast(vol, pose, small_intrinsics).maps
        u, v = small_intrinsics.project(maps.vertices[maps.valid])
        grid_u, grid_v = small_intrinsics.pixel_grid()
        np.testing.assert_allclose(u, grid_u[maps.valid], atol=1e-6)
        np.testing.assert_allclose(v, grid_v[maps.valid], atol=1e-6)
