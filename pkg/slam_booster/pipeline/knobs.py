"""
The approximation control surface of the pipeline.
"""

from dataclasses import dataclass, replace
from typing import Dict, Tuple

from ..config.knob_table import ACCURATE_KNOBS, FIXED_PD1, FIXED_PD2, KNOB_ORDER, VALID_CSR, knob_value
from ..core.errors import RejectedInputError


@dataclass(frozen=True)
class KnobSettings:
    """
    One frame's knob values.

    pd holds the ICP iteration caps per pyramid level, finest first.
    """

    csr: int = ACCURATE_KNOBS["csr"]
    icp_threshold: float = ACCURATE_KNOBS["icp_threshold"]
    pd: Tuple[int, int, int] = ACCURATE_KNOBS["pd"]
    tr: int = ACCURATE_KNOBS["tr"]
    ir: int = ACCURATE_KNOBS["ir"]
    vr: int = ACCURATE_KNOBS["vr"]
    mu: float = ACCURATE_KNOBS["mu"]

    def __post_init__(self):
        object.__setattr__(self, "pd", tuple(int(p) for p in self.pd))
        if self.csr not in VALID_CSR:
            raise RejectedInputError(f"csr must be one of {VALID_CSR}, got {self.csr}", "KnobSettings")
        if len(self.pd) != 3 or min(self.pd) < 1:
            raise RejectedInputError(f"pd needs three caps >= 1, got {self.pd}", "KnobSettings")
        if self.icp_threshold < 0:
            raise RejectedInputError("icp_threshold must be non-negative", "KnobSettings")
        if self.tr < 1 or self.ir < 1:
            raise RejectedInputError("tracking and integration rates must be >= 1", "KnobSettings")
        if self.vr < 8:
            raise RejectedInputError(f"vr must be at least 8, got {self.vr}", "KnobSettings")
        if not self.mu > 0:
            raise RejectedInputError("mu must be positive", "KnobSettings")

    @classmethod
    def accurate(cls, vr: int = ACCURATE_KNOBS["vr"], mu: float = ACCURATE_KNOBS["mu"]) -> "KnobSettings":
        return cls(vr=vr, mu=mu)

    @classmethod
    def from_positions(cls, positions: Dict[str, int], base: "KnobSettings" = None) -> "KnobSettings":
        """Knobs with each controlled knob at its own level (missing knobs stay at level 0)."""
        base = base or cls()
        return replace(
            base,
            csr=knob_value("csr", positions.get("csr", 0)),
            icp_threshold=knob_value("icp", positions.get("icp", 0)),
            pd=(knob_value("pd0", positions.get("pd0", 0)), FIXED_PD1, FIXED_PD2),
        )

    @classmethod
    def from_level(cls, level: int, base: "KnobSettings" = None, csr_only: bool = False) -> "KnobSettings":
        """Knobs for a single approximation level driving every controlled knob (or csr alone)."""
        if csr_only:
            return cls.from_positions({"csr": level}, base)
        return cls.from_positions({knob: level for knob in KNOB_ORDER}, base)

    def with_changes(self, **changes) -> "KnobSettings":
        return replace(self, **changes)

    def controlled_values(self) -> Dict[str, float]:
        return {"csr": self.csr, "icp": self.icp_threshold, "pd0": self.pd[0]}
