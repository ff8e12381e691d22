"""
Benchmark suites and the simulate driver.

A simulation spec bundles a scene, a trajectory and a noise model; the
shipped suites live as JSON documents in the `specs/` directory next to
this module.
"""

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from ..config.settings import settings
from ..core.errors import InvalidSpecError
from ..geometry.camera import CameraIntrinsics
from ..geometry.se3 import Pose
from ..storage.dataset import Dataset
from .noise import NoiseModel, apply_noise
from .renderer import render_depth
from .scene import Scene
from .trajectory import TrajectorySpec, interpolate_trajectory

logger = logging.getLogger(__name__)

SPEC_DIR = Path(__file__).parent / "specs"
BENCHMARK_SUITES = ("room", "wall-pass", "fast-turn")


@dataclass(frozen=True)
class SimulationSpec:
    name: str
    scene: Scene
    trajectory: TrajectorySpec
    noise: NoiseModel
    description: str = ""

    def __post_init__(self):
        self.trajectory.check_within(self.scene)

    def with_frame_count(self, frame_count: int) -> "SimulationSpec":
        return replace(self, trajectory=self.trajectory.with_frame_count(frame_count))

    def noiseless(self) -> "SimulationSpec":
        return replace(self, noise=NoiseModel.off(self.noise.seed))

    def with_seed(self, seed: int) -> "SimulationSpec":
        return replace(self, noise=replace(self.noise, seed=seed))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "scene": self.scene.to_dict(),
            "trajectory": self.trajectory.to_dict(),
            "noise": self.noise.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: Optional[str] = None) -> "SimulationSpec":
        if not isinstance(data, dict):
            raise InvalidSpecError("simulation spec must be a JSON object", "suites")
        for key in ("scene", "trajectory"):
            if key not in data:
                raise InvalidSpecError(f"simulation spec is missing '{key}'", "suites")
        return cls(
            name=name or str(data.get("name", "custom")),
            scene=Scene.from_dict(data["scene"]),
            trajectory=TrajectorySpec.from_dict(data["trajectory"]),
            noise=NoiseModel.from_dict(data.get("noise", {})),
            description=str(data.get("description", "")),
        )


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InvalidSpecError(f"spec file not found: {path}", "suites", e)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidSpecError(f"cannot read spec {path}: {e}", "suites", e)


def available_suites() -> List[str]:
    return sorted(p.stem for p in SPEC_DIR.glob("*.json"))


def load_suite(name: str) -> SimulationSpec:
    """Load one of the shipped suites by name."""
    path = SPEC_DIR / f"{name}.json"
    if not path.is_file():
        raise InvalidSpecError(f"unknown suite {name!r}; available: {', '.join(available_suites())}", "suites")
    return SimulationSpec.from_dict(read_json(path), name=name)


def load_simulation_spec(
    spec: Optional[str] = None,
    scene: Optional[str] = None,
    trajectory: Optional[str] = None,
    noise: Optional[str] = None,
) -> SimulationSpec:
    """
    Resolve a simulation spec from the CLI inputs.

    `spec` is a suite name or a bundled JSON file; `scene`/`trajectory`/`noise`
    are separate JSON files that replace the matching part.
    """
    base: Dict[str, Any] = {}
    name = None
    if spec is not None:
        if Path(spec).is_file():
            base = read_json(spec)
        else:
            loaded = load_suite(spec)
            base, name = loaded.to_dict(), loaded.name
    if scene is not None:
        base["scene"] = read_json(scene)
    if trajectory is not None:
        base["trajectory"] = read_json(trajectory)
    if noise is not None:
        base["noise"] = read_json(noise)
    return SimulationSpec.from_dict(base, name=name)


def simulate(
    spec: SimulationSpec,
    intr: Optional[CameraIntrinsics] = None,
    progress: Optional[bool] = None,
) -> Tuple[List[np.ndarray], List[Pose]]:
    """Render every frame of the spec; returns (raw frames, ground-truth poses)."""
    intr = intr or CameraIntrinsics()
    poses = interpolate_trajectory(spec.trajectory)
    show = settings.show_progress if progress is None else progress

    frames = []
    for index, pose in enumerate(tqdm(poses, desc=f"render {spec.name}", disable=not show)):
        frame = render_depth(spec.scene, pose, intr)
        if not spec.noise.is_zero:
            frame = apply_noise(frame, spec.noise, index)
        frames.append(frame)
    logger.info(f"Simulated {len(frames)} frames of {spec.name} at {intr.width}x{intr.height}")
    return frames, poses


def simulate_dataset(spec: SimulationSpec, intr: Optional[CameraIntrinsics] = None, progress=None) -> Dataset:
    intr = intr or CameraIntrinsics()
    frames, poses = simulate(spec, intr, progress)
    return Dataset(frames, intr, poses, {"spec": spec.to_dict()})


def suite_dataset(
    name: str,
    frame_count: Optional[int] = None,
    noiseless: bool = False,
    intr: Optional[CameraIntrinsics] = None,
) -> Dataset:
    """In-memory dataset for a shipped suite, optionally resampled or noise-free."""
    spec = load_suite(name)
    if frame_count is not None:
        spec = spec.with_frame_count(frame_count)
    if noiseless:
        spec = spec.noiseless()
    return simulate_dataset(spec, intr)
