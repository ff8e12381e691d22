"""
Dataset files on disk.

Layout of a dataset directory:

    dataset.json        intrinsics, frame count and the specs it was generated from
    depth/000000.pgm    one binary PGM (P5, maxval 65535, big-endian) per frame, millimeters
    groundtruth.txt     optional, one line per frame: `frame tx ty tz qx qy qz qw`

Trajectory files (ground truth and estimates) share the same text format;
lines starting with '#' are comments.
"""

import json
import logging
import os
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import DatasetNotFoundError, DimensionMismatchError, MalformedHeaderError
from ..geometry.camera import CameraIntrinsics
from ..geometry.se3 import Pose

logger = logging.getLogger(__name__)

DATASET_FORMAT = "slam-booster-dataset"
DATASET_VERSION = 1
MANIFEST_NAME = "dataset.json"
DEPTH_DIR = "depth"
GROUND_TRUTH_NAME = "groundtruth.txt"
INDEX_WIDTH = 6

PathLike = Union[str, Path]


@dataclass
class Dataset:
    """Depth frames plus optional ground truth, all in memory."""

    frames: List[np.ndarray]
    intrinsics: CameraIntrinsics
    ground_truth: Optional[List[Pose]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def has_ground_truth(self) -> bool:
        return self.ground_truth is not None


def frame_name(index: int) -> str:
    return f"{index:0{INDEX_WIDTH}d}.pgm"


# === PGM ===


def write_pgm(path: PathLike, frame: np.ndarray) -> None:
    """Write a uint16 frame as binary PGM with maxval 65535."""
    if frame.dtype != np.uint16 or frame.ndim != 2:
        raise DimensionMismatchError(f"PGM frames are 2-D uint16, got {frame.dtype} {frame.shape}", "dataset")
    height, width = frame.shape
    header = f"P5\n{width} {height}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(frame.astype(">u2").tobytes())


def _header_tokens(data: bytes, count: int, path: PathLike) -> Tuple[List[bytes], int]:
    tokens: List[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise MalformedHeaderError(f"{path}: PGM header ends early", "dataset")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos : pos + 1].isspace():
        raise MalformedHeaderError(f"{path}: PGM header is not terminated", "dataset")
    return tokens, pos + 1


def read_pgm(path: PathLike) -> np.ndarray:
    """Read a binary 16-bit PGM into a uint16 array."""
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError as e:
        raise DatasetNotFoundError(f"depth frame not found: {path}", "dataset", e)

    tokens, offset = _header_tokens(data, 4, path)
    magic, width_tok, height_tok, maxval_tok = tokens
    if magic != b"P5":
        raise MalformedHeaderError(f"{path}: expected P5 magic, got {magic!r}", "dataset")
    try:
        width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    except ValueError as e:
        raise MalformedHeaderError(f"{path}: non-numeric PGM header field", "dataset", e)
    if width <= 0 or height <= 0:
        raise MalformedHeaderError(f"{path}: bad PGM size {width}x{height}", "dataset")
    if maxval != 65535:
        raise MalformedHeaderError(f"{path}: expected maxval 65535, got {maxval}", "dataset")

    expected = width * height * 2
    payload = data[offset:]
    if len(payload) != expected:
        raise MalformedHeaderError(
            f"{path}: raster has {len(payload)} bytes, header promises {expected}", "dataset"
        )
    return np.frombuffer(payload, dtype=">u2").reshape(height, width).astype(np.uint16)


# === Trajectories ===


def write_trajectory(path: PathLike, poses: Sequence[Pose], indices: Optional[Sequence[int]] = None) -> None:
    """Write `frame tx ty tz qx qy qz qw` lines with full double precision."""
    if indices is None:
        indices = range(len(poses))
    lines = ["# frame tx ty tz qx qy qz qw"]
    for index, pose in zip(indices, poses):
        values = list(pose.translation) + list(pose.quaternion())
        lines.append(f"{int(index)} " + " ".join(f"{v:.17g}" for v in values))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trajectory(path: PathLike) -> Tuple[List[int], List[Pose]]:
    """
    Parse a trajectory file.

    Raises:
        DatasetNotFoundError: missing file
        MalformedHeaderError: a line does not have 8 numeric fields
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise DatasetNotFoundError(f"trajectory file not found: {path}", "dataset", e)

    indices: List[int] = []
    poses: List[Pose] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 8:
            raise MalformedHeaderError(f"{path}:{lineno}: expected 8 fields, got {len(parts)}", "dataset")
        try:
            index = int(float(parts[0]))
            tx, ty, tz, qx, qy, qz, qw = (float(p) for p in parts[1:])
        except ValueError as e:
            raise MalformedHeaderError(f"{path}:{lineno}: non-numeric field", "dataset", e)
        quat = np.array([qx, qy, qz, qw])
        if not np.all(np.isfinite(quat)) or np.linalg.norm(quat) < 1e-12:
            raise MalformedHeaderError(f"{path}:{lineno}: invalid quaternion", "dataset")
        indices.append(index)
        poses.append(Pose.from_quaternion([tx, ty, tz], quat))
    return indices, poses


# === Whole datasets ===


def _replace_dir(staging: Path, target: Path) -> None:
    if target.exists():
        shutil.rmtree(target)
    os.replace(staging, target)


def write_dataset(
    path: PathLike,
    frames: Sequence[np.ndarray],
    ground_truth: Optional[Sequence[Pose]],
    intrinsics: CameraIntrinsics,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write a dataset directory. Files are staged next to the target and moved
    into place only once every file is written.
    """
    target = Path(path)
    if ground_truth is not None and len(ground_truth) != len(frames):
        raise DimensionMismatchError(
            f"{len(frames)} frames but {len(ground_truth)} ground-truth poses", "dataset"
        )
    for i, frame in enumerate(frames):
        if frame.shape != intrinsics.shape:
            raise DimensionMismatchError(
                f"frame {i} has shape {frame.shape}, intrinsics say {intrinsics.shape}", "dataset"
            )

    target.parent.mkdir(parents=True, exist_ok=True)
    staging = target.parent / f".{target.name}.partial"
    if staging.exists():
        shutil.rmtree(staging)
    try:
        (staging / DEPTH_DIR).mkdir(parents=True)
        for i, frame in enumerate(frames):
            write_pgm(staging / DEPTH_DIR / frame_name(i), frame)
        if ground_truth is not None:
            write_trajectory(staging / GROUND_TRUTH_NAME, ground_truth)
        manifest = {
            "format": DATASET_FORMAT,
            "version": DATASET_VERSION,
            "frame_count": len(frames),
            "intrinsics": intrinsics.to_dict(),
            "ground_truth": GROUND_TRUTH_NAME if ground_truth is not None else None,
            "metadata": metadata or {},
        }
        (staging / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        _replace_dir(staging, target)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise

    logger.info(f"Wrote dataset with {len(frames)} frames to {target}")
    return target


def read_manifest(path: PathLike) -> Dict[str, Any]:
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not root.is_dir():
        raise DatasetNotFoundError(f"dataset directory not found: {root}", "dataset")
    if not manifest_path.is_file():
        raise DatasetNotFoundError(f"dataset manifest not found: {manifest_path}", "dataset")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise MalformedHeaderError(f"{manifest_path}: invalid JSON", "dataset", e)
    if manifest.get("format") != DATASET_FORMAT:
        raise MalformedHeaderError(f"{manifest_path}: not a {DATASET_FORMAT} manifest", "dataset")
    return manifest


def read_dataset(path: PathLike) -> Dataset:
    """
    Load a dataset directory written by write_dataset.

    Raises:
        DatasetNotFoundError: directory, manifest, frame or ground-truth file missing
        MalformedHeaderError: unparsable manifest, PGM or trajectory
        DimensionMismatchError: frame sizes or ground-truth length disagree with the manifest
    """
    root = Path(path)
    manifest = read_manifest(root)
    try:
        intrinsics = CameraIntrinsics.from_dict(manifest["intrinsics"])
        frame_count = int(manifest["frame_count"])
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedHeaderError(f"{root / MANIFEST_NAME}: incomplete manifest", "dataset", e)

    frames = []
    for i in range(frame_count):
        frame = read_pgm(root / DEPTH_DIR / frame_name(i))
        if frame.shape != intrinsics.shape:
            raise DimensionMismatchError(
                f"frame {i} is {frame.shape[1]}x{frame.shape[0]}, manifest says "
                f"{intrinsics.width}x{intrinsics.height}",
                "dataset",
            )
        frames.append(frame)

    ground_truth = None
    if manifest.get("ground_truth"):
        _, ground_truth = read_trajectory(root / manifest["ground_truth"])
        if len(ground_truth) != frame_count:
            raise DimensionMismatchError(
                f"ground truth has {len(ground_truth)} poses for {frame_count} frames", "dataset"
            )

    logger.debug(f"Read dataset {root}: {frame_count} frames, ground truth: {ground_truth is not None}")
    return Dataset(frames, intrinsics, ground_truth, manifest.get("metadata", {}))
