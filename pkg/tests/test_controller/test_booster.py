"""
Tests for controller_step and the SlamBooster frame lifecycle.
"""

import numpy as np
import pytest

import slam_booster.controller.booster as booster_module
from slam_booster.config.run_config import ControllerConfig
from slam_booster.controller.booster import SlamBooster, controller_step
from slam_booster.controller.state import ControllerState
from slam_booster.core.phase_timer import PhaseDurations
from slam_booster.geometry.se3 import Pose, Transform, compose
from slam_booster.pipeline.icp import TrackResult
from slam_booster.pipeline.knobs import KnobSettings
from tests.helpers import checkerboard_raw, constant_raw

FLAT = np.full((240, 320), 2.0)
ROUGH = np.where(np.indices((240, 320)).sum(axis=0) % 2 == 0, 1.0, 3.0)


def tracked(pose: Pose) -> TrackResult:
    return TrackResult(pose, 0.001, (3, 2, 1), 0.9, True)


class TestControllerStep:
    """Test cases for controller_step."""

    def setup_method(self):
        self.cfg = ControllerConfig()
        self.running = ControllerState(bootstrap_frames=20, frame_index=25)

    def test_bootstrap_is_accurate(self):
        state = ControllerState(bootstrap_frames=20, frame_index=5)
        knobs, new_state = controller_step(state, FLAT, 0.0, self.cfg)
        assert knobs == KnobSettings.accurate()
        assert new_state.level == 0
        assert not new_state.surface_trigger

    def test_surface_trigger_decrements(self):
        knobs, state = controller_step(self.running, FLAT, 0.0, self.cfg)
        assert state.surface_trigger
        assert state.level == 2
        assert knobs == KnobSettings.from_level(2)

    def test_correction_trigger_saturates(self):
        state = self.running.advance(correction_trigger=True)
        knobs, new_state = controller_step(state, ROUGH, 0.05, self.cfg)
        assert new_state.level == 0
        assert knobs == KnobSettings.accurate()

    @pytest.mark.parametrize("velocity", [0.0, 0.004, 0.009, 0.013, 0.019, 0.03])
    def test_trigger_effect_is_one_level(self, velocity):
        _, without = controller_step(self.running, ROUGH, velocity, self.cfg)
        _, with_trigger = controller_step(self.running, FLAT, velocity, self.cfg)
        assert with_trigger.level == max(0, without.level - 1)

    def test_uncontrolled_strategies(self):
        for strategy in ("default", "accurate"):
            cfg = ControllerConfig(strategy=strategy)
            knobs, state = controller_step(self.running, FLAT, 0.0, cfg)
            assert knobs == KnobSettings.accurate()
            assert state.level == 0

    def test_surface_disabled_for_pid_only(self):
        cfg = ControllerConfig(strategy="pid_only")
        knobs, state = controller_step(self.running.advance(correction_trigger=True), FLAT, 0.0, cfg)
        assert not state.surface_trigger
        assert state.level == 3

    def test_csr_only(self):
        cfg = ControllerConfig(strategy="pid_csr_only")
        knobs, _ = controller_step(self.running, ROUGH, 0.0, cfg)
        assert knobs.csr == 8
        assert knobs.icp_threshold == 1e-8
        assert knobs.pd[0] == 10

    def test_handoff_turns_off_triggers(self):
        cfg = ControllerConfig(handoff_frame=22)
        _, state = controller_step(self.running.advance(correction_trigger=True), FLAT, 0.0, cfg)
        assert not state.surface_trigger
        assert state.level == 3

    def test_base_knobs_kept(self):
        base = KnobSettings.accurate(vr=32, mu=0.2)
        knobs, _ = controller_step(self.running, ROUGH, 0.0, self.cfg, base)
        assert (knobs.vr, knobs.mu) == (32, 0.2)


class TestSlamBooster:
    """Test cases for the decide / correct / finish_frame lifecycle."""

    def setup_method(self):
        self.cfg = ControllerConfig(bootstrap_frames=3)
        self.booster = SlamBooster(self.cfg, initial_pose=Pose.identity())
        self.raw = checkerboard_raw(1000, 3000)

    def run_frame(self, measured: Pose, raw=None):
        durations = PhaseDurations()
        knobs = self.booster.decide(self.raw if raw is None else raw, durations)
        final = self.booster.correct(measured, tracked(measured))
        decision = self.booster.finish_frame(knobs)
        return knobs, final, decision, durations

    def test_bootstrap_frames_are_accurate(self):
        for i in range(3):
            knobs, final, decision, _ = self.run_frame(Pose.from_translation([0.008 * i, 0, 0]))
            assert knobs == KnobSettings.accurate()
            assert decision.level == 0
            assert decision.frame == i
        assert self.booster.state.velocity_window == ()
        assert self.booster.state.prev_transform == Transform(np.eye(3), np.zeros(3))

    def test_velocity_is_recorded(self):
        self.run_frame(Pose.identity())
        _, _, decision, _ = self.run_frame(Pose.from_translation([0.03, 0.04, 0.0]))
        assert decision.velocity == pytest.approx(0.05)
        assert self.booster.state.last_velocity == pytest.approx(0.05)

    def test_control_starts_after_bootstrap(self):
        for i in range(3):
            self.run_frame(Pose.from_translation([0.008 * i, 0, 0]))
        knobs, _, decision, _ = self.run_frame(Pose.from_translation([0.024, 0, 0]))
        # v = 0.008 gives floor(0.6 * 4) = 2
        assert decision.level == 2
        assert knobs == KnobSettings.from_level(2)
        assert len(self.booster.state.velocity_window) == 1

    def test_jump_is_corrected_and_backs_off(self):
        for i in range(3):
            self.run_frame(Pose.from_translation([0.008 * i, 0, 0]))
        self.run_frame(Pose.from_translation([0.024, 0, 0]))
        prev = self.booster.state.prev_pose
        stored = self.booster.state.prev_transform
        _, final, decision, _ = self.run_frame(Pose.from_translation([0.5, 0, 0]))
        assert decision.correction_trigger
        assert final == compose(prev, stored)
        assert self.booster.state.prev_transform == stored

        knobs, _, decision, _ = self.run_frame(compose(final, stored))
        # v_prev is the rejected jump, so the controller is already accurate
        assert decision.level == 0
        assert knobs == KnobSettings.accurate()

    def test_surface_trigger_is_reported(self):
        for i in range(3):
            self.run_frame(Pose.identity())
        _, _, decision, _ = self.run_frame(Pose.identity(), raw=constant_raw(2000))
        assert decision.surface_trigger
        assert decision.level == 2

    def test_controller_time_is_charged(self):
        _, _, _, durations = self.run_frame(Pose.identity())
        assert durations.controller > 0
        assert durations.pipeline_ns == 0

    def test_no_correction_when_disabled(self):
        booster = SlamBooster(ControllerConfig(bootstrap_frames=0, strategy="pid_no_correction"))
        booster.decide(self.raw)
        final = booster.correct(Pose.from_translation([1.0, 0, 0]), tracked(Pose.identity()))
        decision = booster.finish_frame(KnobSettings())
        assert final == Pose.from_translation([1.0, 0, 0])
        assert not decision.correction_trigger

    def test_next_frame_samples_at_last_csr(self, mocker):
        spy = mocker.spy(booster_module, "raw_view")
        self.booster.decide(self.raw)
        self.booster.correct(Pose.identity(), tracked(Pose.identity()))
        self.booster.finish_frame(KnobSettings(csr=4))
        self.booster.decide(self.raw)
        assert spy.call_args_list[-1].args[1] == 4
