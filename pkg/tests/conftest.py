"""
Shared fixtures: cameras, scenes and small simulated datasets.
"""

import pytest

from slam_booster.config.run_config import RunConfig
from slam_booster.geometry.camera import CameraIntrinsics
from slam_booster.geometry.se3 import Pose, look_at
from slam_booster.simulation.scene import Scene
from slam_booster.simulation.suites import load_suite, suite_dataset
from slam_booster.storage.dataset import Dataset

from .helpers import SMALL_INTRINSICS, box_scene


@pytest.fixture
def intrinsics() -> CameraIntrinsics:
    return CameraIntrinsics()


@pytest.fixture
def small_intrinsics() -> CameraIntrinsics:
    return SMALL_INTRINSICS


@pytest.fixture
def wall_scene() -> Scene:
    return load_suite("wall").scene


@pytest.fixture
def structured_scene() -> Scene:
    return box_scene()


@pytest.fixture
def start_pose() -> Pose:
    return look_at([0.0, 0.0, 0.0], [0.0, 0.0, 1.0])


@pytest.fixture
def fast_config() -> RunConfig:
    """Run config for short test sequences: bootstrap of 5 frames."""
    return RunConfig().with_controller(bootstrap_frames=5)


@pytest.fixture(scope="session")
def room_short() -> Dataset:
    """12 noiseless frames of the room suite at half resolution."""
    return suite_dataset("room", frame_count=12, noiseless=True, intr=SMALL_INTRINSICS)
