"""
Tests for per-phase frame timing.
"""

import pytest

from slam_booster.core.phase_timer import PHASES, PhaseDurations, phase_timer


def test_totals():
    d = PhaseDurations(preprocess=1, track=2, integrate=3, raycast=4, controller=5)
    assert d.pipeline_ns == 10
    assert d.total_ns == 15
    assert d.as_dict() == {
        "preprocess_ns": 1,
        "track_ns": 2,
        "integrate_ns": 3,
        "raycast_ns": 4,
        "controller_ns": 5,
    }


def test_timer_accumulates(mocker):
    clock = mocker.patch("slam_booster.core.phase_timer.time.perf_counter_ns", side_effect=[100, 350, 1000, 1100])
    d = PhaseDurations()
    with phase_timer(d, "track"):
        pass
    with phase_timer(d, "track"):
        pass
    assert d.track == 350
    assert clock.call_count == 4


def test_timer_charges_on_error():
    d = PhaseDurations()
    with pytest.raises(ValueError):
        with phase_timer(d, "integrate"):
            raise ValueError("fail")
    assert d.integrate >= 0
    assert d.total_ns == d.integrate


def test_unknown_phase():
    with pytest.raises(KeyError):
        PhaseDurations().add("render", 10)


def test_negative_elapsed_is_clamped():
    d = PhaseDurations()
    d.add("raycast", -5)
    assert d.raycast == 0
    assert len(PHASES) == 5
