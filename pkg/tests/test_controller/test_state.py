"""
Tests for ControllerState.
"""

import pytest

from slam_booster.config.run_config import ControllerConfig
from slam_booster.controller.state import ControllerState
from slam_booster.geometry.se3 import Pose


def test_initial_state():
    cfg = ControllerConfig(bootstrap_frames=7)
    pose = Pose.from_translation([1.0, 2.0, 3.0])
    state = ControllerState.initial(cfg, pose)
    assert state.bootstrap_frames == 7
    assert state.window_length == 7
    assert state.prev_pose == pose
    assert state.velocity_window == ()
    assert state.level == 0
    assert state.positions == (0, 0, 0)


def test_window_length_override():
    state = ControllerState.initial(ControllerConfig(bootstrap_frames=20, window_length=5))
    assert state.window_length == 5


def test_window_keeps_most_recent():
    state = ControllerState(window_length=3)
    for v in (0.1, 0.2, 0.3, 0.4, 0.5):
        state = state.with_velocity(v)
    assert state.velocity_window == (0.3, 0.4, 0.5)


@pytest.mark.parametrize("index,expected", [(0, True), (19, True), (20, False), (100, False)])
def test_in_bootstrap(index, expected):
    assert ControllerState(bootstrap_frames=20, frame_index=index).in_bootstrap is expected


def test_zero_bootstrap_controls_from_first_frame():
    state = ControllerState.initial(ControllerConfig(bootstrap_frames=0))
    assert not state.in_bootstrap
    assert state.window_length == 1


def test_advance_returns_new_state():
    state = ControllerState()
    moved = state.advance(frame_index=4, level=2)
    assert (state.frame_index, state.level) == (0, 0)
    assert (moved.frame_index, moved.level) == (4, 2)
    assert moved.positions == state.positions
