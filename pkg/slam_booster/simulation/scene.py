"""
Signed-distance scenes built from boxes, planes and spheres.

All distance functions are vectorized over points of shape (..., 3) and
exact for their primitive: negative inside solid matter, positive outside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from ..core.errors import InvalidSpecError


def _vec3(value, name: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=np.float64).reshape(3)
    except (TypeError, ValueError) as e:
        raise InvalidSpecError(f"{name} must be a 3-vector, got {value!r}", "scene", e)
    if not np.all(np.isfinite(arr)):
        raise InvalidSpecError(f"{name} must be finite, got {value!r}", "scene")
    return arr


def sd_box(p: np.ndarray, center: np.ndarray, half_extents: np.ndarray) -> np.ndarray:
    q = np.abs(p - center) - half_extents
    outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
    inside = np.minimum(np.max(q, axis=-1), 0.0)
    return outside + inside


def sd_plane(p: np.ndarray, point: np.ndarray, normal: np.ndarray) -> np.ndarray:
    return (p - point) @ normal


def sd_sphere(p: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    return np.linalg.norm(p - center, axis=-1) - radius


@dataclass(frozen=True, eq=False)
class Box:
    center: np.ndarray
    half_extents: np.ndarray

    kind = "box"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center, "box center"))
        object.__setattr__(self, "half_extents", _vec3(self.half_extents, "box half_extents"))
        if np.any(self.half_extents <= 0):
            raise InvalidSpecError("box half_extents must be positive", "scene")

    def sdf(self, p: np.ndarray) -> np.ndarray:
        return sd_box(p, self.center, self.half_extents)

    def extent(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.center - self.half_extents, self.center + self.half_extents

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "box", "center": self.center.tolist(), "half_extents": self.half_extents.tolist()}


@dataclass(frozen=True, eq=False)
class Plane:
    """Half-space wall; `normal` points into free space."""

    point: np.ndarray
    normal: np.ndarray

    kind = "plane"

    def __post_init__(self):
        object.__setattr__(self, "point", _vec3(self.point, "plane point"))
        normal = _vec3(self.normal, "plane normal")
        norm = np.linalg.norm(normal)
        if norm < 1e-12:
            raise InvalidSpecError("plane normal must be non-zero", "scene")
        object.__setattr__(self, "normal", normal / norm)

    def sdf(self, p: np.ndarray) -> np.ndarray:
        return sd_plane(p, self.point, self.normal)

    def extent(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.point, self.point

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "plane", "point": self.point.tolist(), "normal": self.normal.tolist()}


@dataclass(frozen=True, eq=False)
class Sphere:
    center: np.ndarray
    radius: float

    kind = "sphere"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center, "sphere center"))
        if not self.radius > 0:
            raise InvalidSpecError("sphere radius must be positive", "scene")
        object.__setattr__(self, "radius", float(self.radius))

    def sdf(self, p: np.ndarray) -> np.ndarray:
        return sd_sphere(p, self.center, self.radius)

    def extent(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.center - self.radius, self.center + self.radius

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "sphere", "center": self.center.tolist(), "radius": self.radius}


Primitive = Union[Box, Plane, Sphere]

_PRIMITIVE_FIELDS = {
    "box": (Box, ("center", "half_extents")),
    "plane": (Plane, ("point", "normal")),
    "sphere": (Sphere, ("center", "radius")),
}


def primitive_from_dict(data: Dict[str, Any]) -> Primitive:
    if not isinstance(data, dict) or "type" not in data:
        raise InvalidSpecError(f"primitive must be an object with a 'type', got {data!r}", "scene")
    kind = data["type"]
    if kind not in _PRIMITIVE_FIELDS:
        raise InvalidSpecError(f"unknown primitive type {kind!r}", "scene")
    cls, names = _PRIMITIVE_FIELDS[kind]
    missing = [n for n in names if n not in data]
    if missing:
        raise InvalidSpecError(f"{kind} is missing {', '.join(missing)}", "scene")
    return cls(*(data[n] for n in names))


class Scene:
    """A union of primitives inside an axis-aligned bounding box (meters)."""

    def __init__(self, primitives: Sequence[Primitive], bounds_min, bounds_max):
        if not primitives:
            raise InvalidSpecError("a scene needs at least one primitive", "scene")
        self.primitives: Tuple[Primitive, ...] = tuple(primitives)
        self.bounds_min = _vec3(bounds_min, "bounds min")
        self.bounds_max = _vec3(bounds_max, "bounds max")
        if np.any(self.bounds_max <= self.bounds_min):
            raise InvalidSpecError("scene bounds max must exceed min on every axis", "scene")
        for prim in self.primitives:
            lo, hi = prim.extent()
            if np.any(lo < self.bounds_min - 1e-9) or np.any(hi > self.bounds_max + 1e-9):
                raise InvalidSpecError(f"{prim.kind} at {lo.tolist()} lies outside the scene bounds", "scene")

    def sdf(self, points: np.ndarray) -> np.ndarray:
        """Signed distance at points (..., 3): the minimum over primitives."""
        points = np.asarray(points, dtype=np.float64)
        result = self.primitives[0].sdf(points)
        for prim in self.primitives[1:]:
            result = np.minimum(result, prim.sdf(points))
        return result

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """True where points lie inside the bounding box."""
        points = np.asarray(points, dtype=np.float64)
        return np.all((points >= self.bounds_min - tol) & (points <= self.bounds_max + tol), axis=-1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bounds": {"min": self.bounds_min.tolist(), "max": self.bounds_max.tolist()},
            "primitives": [p.to_dict() for p in self.primitives],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Scene":
        """
        Build a scene from its JSON form:

            {"bounds": {"min": [x, y, z], "max": [x, y, z]},
             "primitives": [{"type": "box", "center": [...], "half_extents": [...]},
                            {"type": "plane", "point": [...], "normal": [...]},
                            {"type": "sphere", "center": [...], "radius": r}]}
        """
        if not isinstance(data, dict):
            raise InvalidSpecError("scene spec must be a JSON object", "scene")
        prims: List[Primitive] = [primitive_from_dict(p) for p in data.get("primitives", [])]
        bounds = data.get("bounds")
        if not isinstance(bounds, dict) or "min" not in bounds or "max" not in bounds:
            raise InvalidSpecError("scene spec needs bounds.min and bounds.max", "scene")
        return cls(prims, bounds["min"], bounds["max"])


def sdf_eval(scene: Scene, point) -> float:
    """Signed distance from a single point to the scene surface."""
    return float(scene.sdf(_vec3(point, "point")))
