"""
Online approximation controller.
"""

from .booster import Decision, SlamBooster, controller_step
from .correction import pose_correction
from .levels import ApproxLevel
from .pid import pid_step
from .precision import quantize_maps, quantize_reduced
from .state import ControllerState
from .step import step_controller_step
from .surface import surface_detection

__all__ = [
    "ApproxLevel",
    "ControllerState",
    "Decision",
    "SlamBooster",
    "controller_step",
    "pid_step",
    "pose_correction",
    "quantize_maps",
    "quantize_reduced",
    "step_controller_step",
    "surface_detection",
]
