"""
Tests for smooth-surface detection.
"""

import numpy as np

from slam_booster.config.run_config import ControllerConfig
from slam_booster.controller.surface import quadrant_samples, surface_detection


class TestSurfaceDetection:
    """Test cases for surface_detection."""

    def setup_method(self):
        self.cfg = ControllerConfig()

    def test_constant_frame_triggers(self):
        assert surface_detection(np.full((240, 320), 2.0), self.cfg)

    def test_checkerboard_does_not_trigger(self):
        rows, cols = np.indices((240, 320))
        frame = np.where((rows + cols) % 2 == 0, 1.0, 3.0)
        assert not surface_detection(frame, self.cfg)

    def test_invalid_frame_does_not_trigger(self):
        assert not surface_detection(np.zeros((240, 320)), self.cfg)

    def test_one_structured_quadrant_is_enough(self):
        frame = np.full((240, 320), 2.0)
        frame[120:, 160:] = np.random.default_rng(0).uniform(1.0, 3.0, (120, 160))
        assert not surface_detection(frame, self.cfg)

    def test_border_is_ignored(self):
        frame = np.full((240, 320), 2.0)
        frame[:20] = 5.0
        frame[:, :30] = 0.5
        assert surface_detection(frame, self.cfg)

    def test_small_noise_still_smooth(self):
        frame = 2.0 + np.random.default_rng(1).normal(0.0, 0.01, (240, 320))
        assert surface_detection(frame, self.cfg)

    def test_lowest_resolution_is_fully_sampled(self):
        samples = quadrant_samples(np.full((30, 40), 2.0), self.cfg)
        assert len(samples) == 4
        # 10% borders leave 24x32 pixels, i.e. 12x16 per quadrant, sampled on an 8x8 grid
        assert all(s.size == 64 for s in samples)

    def test_sample_count_per_quadrant(self):
        cfg = ControllerConfig(samples_per_quadrant=16)
        assert all(s.size <= 16 for s in quadrant_samples(np.full((240, 320), 2.0), cfg))
