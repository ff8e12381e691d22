"""
Hierarchical step controller.

Instead of moving every knob together, this controller tunes one knob by one
step at a time, following the order of importance of the knobs: csr is
approximated first, then icp, then pd0, and accuracy is restored in the
reverse order.
"""

from typing import Optional, Tuple

from ..config.knob_table import KNOB_ORDER, LEVEL_VALUES
from ..config.run_config import ControllerConfig
from ..pipeline.knobs import KnobSettings
from .pid import pid_step
from .state import ControllerState

INCREASE = 1
HOLD = 0
DECREASE = -1


def step_signal(state: ControllerState, v_prev: float, cfg: ControllerConfig) -> int:
    """
    Increase/decrease/hold from the PID velocity comparisons: at or above v_ref,
    or when a trigger fired, back off; any approximation headroom the PID
    would grant means increase.
    """
    if v_prev >= cfg.v_ref or state.surface_trigger or state.correction_trigger:
        return DECREASE
    return INCREASE if pid_step(state, v_prev, cfg).level > 0 else HOLD


def apply_signal(positions: Tuple[int, ...], signal: int) -> Tuple[int, ...]:
    """Move at most one knob by one step; saturated signals leave positions unchanged."""
    updated = list(positions)
    if signal == INCREASE:
        for i, knob in enumerate(KNOB_ORDER):
            if updated[i] < len(LEVEL_VALUES[knob]) - 1:
                updated[i] += 1
                break
    elif signal == DECREASE:
        for i in reversed(range(len(KNOB_ORDER))):
            if updated[i] > 0:
                updated[i] -= 1
                break
    return tuple(updated)


def step_controller_step(
    state: ControllerState,
    v_prev: float,
    cfg: ControllerConfig,
    base: Optional[KnobSettings] = None,
) -> Tuple[KnobSettings, ControllerState]:
    signal = step_signal(state, v_prev, cfg)
    positions = apply_signal(state.positions, signal)
    knobs = KnobSettings.from_positions(dict(zip(KNOB_ORDER, positions)), base)
    return knobs, state.advance(positions=positions, level=max(positions))
