"""
Per-run configuration.

A run is described by one JSON document (the `--config` file) plus optional
`--set dotted.key=value` overrides. The document is validated with pydantic
and echoed verbatim into every output directory.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import ConfigError
from ..geometry.camera import CameraIntrinsics

logger = logging.getLogger(__name__)

STRATEGIES = (
    "default",
    "accurate",
    "pid",
    "pid_only",
    "pid_no_surface",
    "pid_no_correction",
    "pid_csr_only",
    "step",
)

Strategy = Literal[
    "default",
    "accurate",
    "pid",
    "pid_only",
    "pid_no_surface",
    "pid_no_correction",
    "pid_csr_only",
    "step",
]
PrecisionMode = Literal["full", "reduced"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IntrinsicsConfig(_Strict):
    fx: float = Field(277.0, gt=0)
    fy: float = Field(277.0, gt=0)
    cx: float = 159.5
    cy: float = 119.5
    width: int = Field(320, gt=0)
    height: int = Field(240, gt=0)

    def to_intrinsics(self) -> CameraIntrinsics:
        return CameraIntrinsics(**self.model_dump())


class VolumeConfig(_Strict):
    """TSDF volume placement and resolution."""

    vr: int = Field(64, ge=8)
    edge: float = Field(5.0, gt=0)
    mu: float = Field(0.1, gt=0)
    max_weight: float = Field(100.0, gt=0)
    origin: Tuple[float, float, float] = (-2.5, -2.5, -2.5)

    @property
    def voxel_size(self) -> float:
        return self.edge / self.vr


class TrackingConfig(_Strict):
    """ICP association and acceptance thresholds."""

    max_distance: float = Field(0.1, gt=0)
    max_normal_angle_deg: float = Field(30.0, gt=0, le=90)
    min_inlier: float = Field(0.5, ge=0, le=1)
    max_rms: float = Field(0.02, gt=0)
    max_condition: float = Field(1e6, gt=1)
    pyramid_levels: int = Field(3, ge=1)


class ControllerConfig(_Strict):
    """Online controller constants; every one is overridable from the run config."""

    strategy: Strategy = "pid"
    precision_mode: PrecisionMode = "full"
    bootstrap_frames: int = Field(20, ge=0)
    window_length: Optional[int] = Field(None, ge=1)
    v_ref: float = Field(0.02, gt=0)
    correction_threshold: float = Field(0.06, gt=0)
    rotation_correction_threshold: float = Field(0.087, gt=0)
    surface_sigma_threshold: float = Field(0.1, gt=0)
    samples_per_quadrant: int = Field(64, ge=1)
    min_quadrant_samples: int = Field(10, ge=1)
    margin_fraction: float = Field(0.1, ge=0, lt=0.5)
    p_steps: int = Field(4, ge=1)
    handoff_frame: Optional[int] = Field(None, ge=0)

    @property
    def window(self) -> int:
        """Velocity window length; defaults to the bootstrap length."""
        if self.window_length is not None:
            return self.window_length
        return max(1, self.bootstrap_frames)

    @property
    def surface_enabled(self) -> bool:
        return self.strategy in ("pid", "pid_no_correction", "pid_csr_only", "step")

    @property
    def correction_enabled(self) -> bool:
        return self.strategy in ("pid", "pid_no_surface", "pid_csr_only", "step")

    @property
    def reduced_precision(self) -> bool:
        return self.precision_mode == "reduced" and self.strategy != "accurate"


class RunConfig(_Strict):
    """Everything needed to reproduce one pipeline run."""

    dataset: Optional[str] = None
    intrinsics: Optional[IntrinsicsConfig] = None
    volume: VolumeConfig = Field(default_factory=VolumeConfig)
    tracking: TrackingConfig = Field(default_factory=TrackingConfig)
    controller: ControllerConfig = Field(default_factory=ControllerConfig)
    output_dir: Optional[str] = None
    seed: int = 0
    reference: Literal["ground_truth", "accurate"] = "ground_truth"

    @field_validator("dataset", "output_dir")
    @classmethod
    def _non_empty(cls, value):
        if value is not None and not str(value).strip():
            raise ValueError("path must not be empty")
        return value

    @model_validator(mode="after")
    def _handoff_after_bootstrap(self):
        handoff = self.controller.handoff_frame
        if handoff is not None and handoff < self.controller.bootstrap_frames:
            logger.warning(
                f"handoff_frame {handoff} falls inside the bootstrap phase; plain PID runs from frame "
                f"{self.controller.bootstrap_frames}"
            )
        return self

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def with_controller(self, **changes) -> "RunConfig":
        """Copy of this config with controller fields replaced (validated)."""
        controller = ControllerConfig.model_validate({**self.controller.model_dump(), **changes})
        return self.model_copy(update={"controller": controller})


def parse_override(item: str) -> Tuple[str, Any]:
    """Split `dotted.key=value`; the value is read as JSON, falling back to a plain string."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not of the form key=value", "run_config")
    key, raw = item.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {item!r} has an empty key", "run_config")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(document: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    for item in overrides:
        key, value = parse_override(item)
        node = document
        parts = key.split(".")
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override {key!r} descends into non-object {part!r}", "run_config")
            node = child
        node[parts[-1]] = value
    return document


def load_run_config(path: Optional[str] = None, overrides: Iterable[str] = ()) -> RunConfig:
    """
    Load and validate a run configuration.

    Args:
        path: JSON config file (optional; defaults apply when omitted)
        overrides: `dotted.key=value` strings applied before validation

    Raises:
        ConfigError: unreadable file, bad JSON, bad override or failed validation
    """
    document: Dict[str, Any] = {}
    if path is not None:
        config_path = Path(path)
        if not config_path.is_file():
            raise ConfigError(f"config file not found: {config_path}", "run_config")
        try:
            document = json.loads(config_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {config_path}: {e}", "run_config", e)
        if not isinstance(document, dict):
            raise ConfigError("config document must be a JSON object", "run_config")

    document = apply_overrides(document, overrides)
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"invalid run config: {e}", "run_config", e)
