"""
Smooth-surface detection.

A frame looking at a large featureless surface gives ICP little to lock on
to. Depth spread is measured in the four quadrants of the frame (borders
excluded); if every quadrant is flat, the trigger fires.
"""

import logging
import math
from typing import List

import numpy as np

from ..config.run_config import ControllerConfig

logger = logging.getLogger(__name__)


def _sample_axis(start: int, stop: int, count: int) -> np.ndarray:
    """Up to `count` evenly spread integer indices in [start, stop)."""
    if stop <= start:
        return np.empty(0, dtype=np.int64)
    count = min(count, stop - start)
    return np.unique(np.rint(np.linspace(start, stop - 1, count)).astype(np.int64))


def quadrant_samples(frame: np.ndarray, cfg: ControllerConfig) -> List[np.ndarray]:
    """
    Valid depth samples of each quadrant, in (top-left, top-right,
    bottom-left, bottom-right) order.
    """
    depth = np.asarray(frame, dtype=np.float64)
    height, width = depth.shape
    top = int(math.floor(cfg.margin_fraction * height))
    left = int(math.floor(cfg.margin_fraction * width))
    bottom, right = height - top, width - left
    mid_row = (top + bottom) // 2
    mid_col = (left + right) // 2
    per_axis = max(1, int(math.ceil(math.sqrt(cfg.samples_per_quadrant))))

    samples = []
    for r0, r1 in ((top, mid_row), (mid_row, bottom)):
        rows = _sample_axis(r0, r1, per_axis)
        for c0, c1 in ((left, mid_col), (mid_col, right)):
            cols = _sample_axis(c0, c1, per_axis)
            values = depth[np.ix_(rows, cols)].ravel()[: cfg.samples_per_quadrant]
            samples.append(values[np.isfinite(values) & (values > 0)])
    return samples


def surface_detection(frame: np.ndarray, cfg: ControllerConfig) -> bool:
    """
    True iff every quadrant has at least `min_quadrant_samples` valid samples
    and a population standard deviation below `surface_sigma_threshold`.
    """
    for values in quadrant_samples(frame, cfg):
        if values.size < cfg.min_quadrant_samples:
            return False
        if float(np.std(values)) >= cfg.surface_sigma_threshold:
            return False
    return True
