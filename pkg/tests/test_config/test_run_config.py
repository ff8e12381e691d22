"""
Tests for run configuration loading and overrides.
"""

import json
from pathlib import Path

import pytest

from slam_booster.config.run_config import (
    ControllerConfig,
    RunConfig,
    apply_overrides,
    load_run_config,
    parse_override,
)
from slam_booster.core.errors import ConfigError


class TestOverrides:
    """Test cases for --set overrides."""

    def test_json_values(self):
        assert parse_override("controller.v_ref=0.03") == ("controller.v_ref", 0.03)
        assert parse_override("controller.handoff_frame=null") == ("controller.handoff_frame", None)

    def test_plain_string_fallback(self):
        assert parse_override("controller.strategy=step") == ("controller.strategy", "step")

    @pytest.mark.parametrize("item", ["novalue", "=3"])
    def test_malformed(self, item):
        with pytest.raises(ConfigError):
            parse_override(item)

    def test_nested_assignment(self):
        doc = apply_overrides({"volume": {"vr": 64}}, ["volume.mu=0.05", "controller.p_steps=3"])
        assert doc == {"volume": {"vr": 64, "mu": 0.05}, "controller": {"p_steps": 3}}

    def test_cannot_descend_into_value(self):
        with pytest.raises(ConfigError):
            apply_overrides({"seed": 1}, ["seed.x=2"])


class TestLoadRunConfig:
    """Test cases for load_run_config."""

    def test_defaults(self):
        config = load_run_config()
        assert config.controller.strategy == "pid"
        assert config.controller.v_ref == 0.02
        assert config.controller.bootstrap_frames == 20
        assert config.volume.vr == 64

    def test_file_plus_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"dataset": "data/room", "controller": {"strategy": "step"}}))
        config = load_run_config(str(path), ["controller.v_ref=0.05"])
        assert config.dataset == "data/room"
        assert config.controller.strategy == "step"
        assert config.controller.v_ref == 0.05

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(str(tmp_path / "absent.json"))

    def test_bad_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_run_config(str(path))

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_run_config(str(path))

    @pytest.mark.parametrize(
        "override",
        ["controller.strategy=fastest", "controller.v_ref=0", "volume.vr=4", "colour=red", "dataset=\" \""],
    )
    def test_validation_errors(self, override):
        with pytest.raises(ConfigError):
            load_run_config(None, [override])


class TestControllerConfig:
    """Test cases for strategy flags and derived values."""

    @pytest.mark.parametrize(
        "strategy,surface,correction",
        [
            ("pid", True, True),
            ("pid_only", False, False),
            ("pid_no_surface", False, True),
            ("pid_no_correction", True, False),
            ("step", True, True),
            ("default", False, False),
        ],
    )
    def test_strategy_flags(self, strategy, surface, correction):
        cfg = ControllerConfig(strategy=strategy)
        assert cfg.surface_enabled is surface
        assert cfg.correction_enabled is correction

    def test_window_defaults_to_bootstrap(self):
        assert ControllerConfig(bootstrap_frames=12).window == 12
        assert ControllerConfig(bootstrap_frames=12, window_length=4).window == 4

    def test_reduced_precision_never_for_accurate(self):
        assert ControllerConfig(precision_mode="reduced").reduced_precision
        assert not ControllerConfig(strategy="accurate", precision_mode="reduced").reduced_precision

    def test_with_controller_validates(self):
        config = RunConfig()
        assert config.with_controller(strategy="step").controller.strategy == "step"
        assert config.controller.strategy == "pid"
        with pytest.raises(ValueError):
            config.with_controller(p_steps=0)

    def test_echo_is_json(self):
        echo = RunConfig(dataset="data/room").echo()
        assert json.loads(json.dumps(echo)) == echo
        assert echo["volume"]["origin"] == [-2.5, -2.5, -2.5]


def test_shipped_default_config_loads():
    path = Path(__file__).resolve().parents[2] / "configs" / "default.json"
    config = load_run_config(str(path))
    assert config == RunConfig(dataset="datasets/room")
