"""
Tests for vertex/normal maps and image pyramids.
"""

import numpy as np

from slam_booster.geometry.camera import CameraIntrinsics
from slam_booster.pipeline.pyramid import build_pyramid, downsample_depth, vertex_normal_map

INTR_80 = CameraIntrinsics().scaled(4)


class TestPyramid:
    """Test cases for build_pyramid."""

    def test_level_shapes(self):
        levels = build_pyramid(np.full((60, 80), 2.0, dtype=np.float32), INTR_80)
        assert [m.shape for m in levels] == [(60, 80), (30, 40), (15, 20)]
        assert levels[2].intrinsics.shape == (15, 20)

    def test_flat_wall_normals(self):
        levels = build_pyramid(np.full((60, 80), 2.0, dtype=np.float32), INTR_80)
        for maps in levels:
            normals = maps.normals[maps.valid]
            assert len(normals) > 0
            np.testing.assert_allclose(normals, np.tile([0.0, 0.0, -1.0], (len(normals), 1)), atol=1e-3)

    def test_reprojection_roundtrip(self):
        rng = np.random.default_rng(5)
        depth = rng.uniform(1.0, 3.0, (60, 80)).astype(np.float32)
        maps = vertex_normal_map(depth, INTR_80)
        u, v = INTR_80.project(maps.vertices[maps.valid])
        grid_u, grid_v = INTR_80.pixel_grid()
        np.testing.assert_allclose(u, grid_u[maps.valid], atol=1e-6)
        np.testing.assert_allclose(v, grid_v[maps.valid], atol=1e-6)

    def test_border_and_holes_invalid(self):
        depth = np.full((60, 80), 2.0, dtype=np.float32)
        depth[20, 30] = 0.0
        maps = vertex_normal_map(depth, INTR_80)
        for border in (maps.valid[0], maps.valid[-1], maps.valid[:, 0], maps.valid[:, -1]):
            assert not border.any()
        for row, col in [(20, 30), (19, 30), (21, 30), (20, 29), (20, 31)]:
            assert not maps.valid[row, col]
        assert maps.valid[19, 29]
        assert np.all(maps.vertices[~maps.valid] == 0)

    def test_noisy_wall_normals_stay_close(self):
        rng = np.random.default_rng(11)
        depth = (2.0 + rng.normal(0.0, 0.001, (60, 80))).astype(np.float32)
        maps = vertex_normal_map(depth, INTR_80)
        cos = maps.normals[maps.valid] @ np.array([0.0, 0.0, -1.0])
        assert np.median(np.degrees(np.arccos(np.clip(cos, -1.0, 1.0)))) < 5.0


class TestDownsample:
    """Test cases for downsample_depth."""

    def test_averages_valid_only(self):
        depth = np.array([[1.0, 3.0], [0.0, 0.0]], dtype=np.float32)
        assert downsample_depth(depth)[0, 0] == 2.0

    def test_empty_block_stays_invalid(self):
        assert downsample_depth(np.zeros((2, 2), dtype=np.float32))[0, 0] == 0.0

    def test_odd_size_drops_trailing(self):
        assert downsample_depth(np.ones((15, 21), dtype=np.float32)).shape == (7, 10)
