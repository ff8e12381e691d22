"""
Tests for knob-ranking sweeps and the ablation ladder.
"""

import pytest

from slam_booster.config.run_config import RunConfig
from slam_booster.core.errors import InvalidSpecError
from slam_booster.core.runner import BoosterRunner
from slam_booster.evaluation.experiments import (
    ABLATION_LADDER,
    LADDER_COLUMNS,
    SWEEP_COLUMNS,
    ablation_ladder,
    knob_ranking_sweep,
    reference_trajectory,
    sweep_knobs,
)
from slam_booster.pipeline.knobs import KnobSettings
from slam_booster.storage.dataset import Dataset


@pytest.fixture
def tiny(room_short) -> Dataset:
    return Dataset(room_short.frames[:6], room_short.intrinsics, room_short.ground_truth[:6])


@pytest.fixture
def config(fast_config) -> RunConfig:
    return fast_config.with_controller(bootstrap_frames=2)


class TestSweepKnobs:
    """Test cases for sweep_knobs."""

    def test_replaces_one_knob(self):
        base = KnobSettings.accurate()
        assert sweep_knobs("csr", 4, base) == base.with_changes(csr=4)
        assert sweep_knobs("icp", 1e-5, base).icp_threshold == 1e-5
        assert sweep_knobs("pd1", 2, base).pd == (10, 2, 4)
        assert sweep_knobs("pd0", 6, base).pd == (6, 5, 4)

    def test_unknown_knob(self):
        with pytest.raises(InvalidSpecError):
            sweep_knobs("vr", 32, KnobSettings.accurate())


class TestKnobRankingSweep:
    """Test cases for knob_ranking_sweep."""

    def test_bad_arguments(self, tiny):
        with pytest.raises(InvalidSpecError):
            knob_ranking_sweep(tiny, "tr")
        with pytest.raises(InvalidSpecError):
            knob_ranking_sweep(tiny, "csr", values=[])
        with pytest.raises(InvalidSpecError):
            knob_ranking_sweep(tiny, "csr", values=[1], trials=0)

    def test_level_zero_value_matches_plain_run(self, tiny, config):
        table = knob_ranking_sweep(tiny, "csr", values=[1], config=config, workers=1)
        plain = BoosterRunner(config.with_controller(strategy="default")).run(tiny)
        assert list(table.columns) == SWEEP_COLUMNS
        assert len(table) == 1
        assert table.loc[0, "ate_m"] == pytest.approx(plain.ate, abs=1e-12)
        assert table.loc[0, "tracked_pct"] == plain.report.tracked_pct

    def test_rows_keep_value_order_in_parallel(self, tiny, config):
        table = knob_ranking_sweep(tiny, "csr", values=[4, 1], config=config, workers=2)
        assert list(table["value"]) == [4, 1]
        assert (table["trials"] == 1).all()

    def test_trials_repeat_runs(self, tiny, config, mocker):
        spy = mocker.spy(BoosterRunner, "run")
        knob_ranking_sweep(tiny, "pd0", values=[8], config=config, trials=2, workers=1)
        assert spy.call_count == 2


class TestAblationLadder:
    """Test cases for ablation_ladder."""

    def test_one_row_per_rung(self, tiny, config):
        table = ablation_ladder(tiny, config, workers=1)
        assert list(table.columns) == LADDER_COLUMNS
        assert list(table["rung"]) == [rung for rung, _, _ in ABLATION_LADDER]
        assert table.loc[0, "map_difference"] == 0.0
        assert table["map_difference"].between(0.0, 1.0).all()
        assert table.loc[0, "csr_changes"] == 0


def test_reference_trajectory_covers_every_frame(tiny, config):
    trajectory = reference_trajectory(tiny, config)
    assert len(trajectory) == len(tiny)
    assert trajectory[0].is_close(tiny.ground_truth[0])
