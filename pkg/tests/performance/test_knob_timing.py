"""
Timing properties of the knobs on a fixed 50-frame sequence.

Wall-clock assertions; run on an otherwise idle machine.
"""

import numpy as np
import pytest

from slam_booster.config.run_config import RunConfig
from slam_booster.core.runner import BoosterRunner
from slam_booster.evaluation.experiments import knob_ranking_sweep
from slam_booster.pipeline.knobs import KnobSettings
from slam_booster.simulation.suites import suite_dataset

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def sequence():
    return suite_dataset("room", frame_count=50, noiseless=True)


@pytest.fixture(scope="module")
def config():
    return RunConfig().with_controller(strategy="default")


def test_coarse_csr_preprocesses_and_tracks_faster(sequence, config):
    def front_end(csr):
        result = BoosterRunner(config, fixed_knobs=KnobSettings.accurate().with_changes(csr=csr)).run(sequence)
        return float(np.median([log.durations.preprocess + log.durations.track for log in result.logs]))

    assert front_end(8) < front_end(1)


def test_frame_time_non_increasing_in_csr(sequence, config):
    medians = []
    for csr in (1, 2, 4, 8):
        result = BoosterRunner(config, fixed_knobs=KnobSettings.accurate().with_changes(csr=csr)).run(sequence)
        medians.append(float(np.median([log.frame_ns for log in result.logs])))
    assert all(later <= earlier for earlier, later in zip(medians, medians[1:]))


def test_csr_has_the_widest_time_range(sequence, config):
    ranges = {}
    for knob in ("csr", "icp", "pd0"):
        table = knob_ranking_sweep(sequence, knob, config=config, workers=1)
        ranges[knob] = table["median_frame_ns"].max() - table["median_frame_ns"].min()
    assert ranges["csr"] == max(ranges.values())
