from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from ..core.errors import InvalidSpecError


@dataclass(frozen=True)
class NoiseModel:
    """
    Depth-dependent Gaussian noise plus random pixel dropout.

    sigma(z) = sigma0 + sigma1 * z**2, with z in meters.
    """

    sigma0: float = 0.002
    sigma1: float = 0.002
    dropout_prob: float = 0.005
    seed: int = 0

    def __post_init__(self):
        if self.sigma0 < 0 or self.sigma1 < 0:
            raise InvalidSpecError("noise sigmas must be non-negative", "noise")
        # dropout_prob = 1 is accepted and blanks every pixel
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise InvalidSpecError(f"dropout_prob must be in [0, 1], got {self.dropout_prob}", "noise")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidSpecError("noise seed must be a 64-bit unsigned integer", "noise")

    @classmethod
    def off(cls, seed: int = 0) -> "NoiseModel":
        return cls(0.0, 0.0, 0.0, seed)

    @property
    def is_zero(self) -> bool:
        return self.sigma0 == 0 and self.sigma1 == 0 and self.dropout_prob == 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NoiseModel":
        unknown = set(data) - {"sigma0", "sigma1", "dropout_prob", "seed"}
        if unknown:
            raise InvalidSpecError(f"unknown noise keys: {sorted(unknown)}", "noise")
        try:
            return cls(
                sigma0=float(data.get("sigma0", cls.sigma0)),
                sigma1=float(data.get("sigma1", cls.sigma1)),
                dropout_prob=float(data.get("dropout_prob", cls.dropout_prob)),
                seed=int(data.get("seed", cls.seed)),
            )
        except (TypeError, ValueError) as e:
            raise InvalidSpecError(f"bad noise spec: {e}", "noise", e)


def apply_noise(frame: np.ndarray, model: NoiseModel, frame_index: int = 0) -> np.ndarray:
    """
    Perturb a raw depth frame (uint16 mm).

    The random stream is keyed by (seed, frame_index), so every frame of a
    sequence is reproducible on its own. Noisy valid pixels stay valid (>= 1 mm)
    unless dropped.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(model.seed), int(frame_index)]))
    gauss = rng.standard_normal(frame.shape)
    drop = rng.random(frame.shape) < model.dropout_prob

    valid = frame > 0
    depth_mm = frame.astype(np.float64)
    z = depth_mm / 1000.0
    sigma_mm = (model.sigma0 + model.sigma1 * z * z) * 1000.0
    noisy = np.rint(depth_mm + gauss * sigma_mm)
    noisy = np.clip(noisy, 1, 65535)

    out = np.where(valid & ~drop, noisy, 0.0)
    return out.astype(np.uint16)
