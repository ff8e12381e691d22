"""
Synthetic ground truth: signed-distance scenes, keyframe trajectories,
a sphere-tracing depth camera and its noise model.

Usage:
    from slam_booster.simulation import load_suite, simulate

    frames, truth = simulate(load_suite("room"))
"""

from .noise import NoiseModel, apply_noise
from .renderer import render_depth
from .scene import Box, Plane, Scene, Sphere, sdf_eval
from .suites import (
    BENCHMARK_SUITES,
    SimulationSpec,
    available_suites,
    load_simulation_spec,
    load_suite,
    simulate,
    simulate_dataset,
    suite_dataset,
)
from .trajectory import TrajectorySpec, interpolate_trajectory

__all__ = [
    "Box",
    "Plane",
    "Sphere",
    "Scene",
    "sdf_eval",
    "render_depth",
    "NoiseModel",
    "apply_noise",
    "TrajectorySpec",
    "interpolate_trajectory",
    "SimulationSpec",
    "BENCHMARK_SUITES",
    "available_suites",
    "load_suite",
    "load_simulation_spec",
    "simulate",
    "simulate_dataset",
    "suite_dataset",
]
