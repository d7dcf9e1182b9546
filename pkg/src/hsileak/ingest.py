"""Read and write cubes, label maps and splits.

Cube files (``.hsic``) start with one ASCII header line::

    HSICUBE1 <height> <width> <bands> f32le\\n

followed by ``height*width*bands`` little-endian float32 values stored band
sequentially: the whole plane of band 0 in row-major order, then band 1, and
so on. Cubes held in float64 are rounded to float32 on write.

Label files are text: a first line ``H W`` and then H rows of W
space-separated integers (0 = unlabeled). Split files use the same grid with
values 0 (excluded), 1 (train), 2 (test) and carry a ``seed <int>`` line
between the size line and the grid.

Real benchmark scenes (ENVI, .mat) are not parsed here; convert them with
your own tooling into a numpy array and call ``write_cube``/``write_labels``.
"""

from __future__ import annotations

import os
from typing import List, Optional

import numpy as np

from .datamodel import FeatureSet, HyperCube, LabelMap, SplitMask
from .errors import (
    BadValueError,
    FormatError,
    MagicMismatchError,
    NonFiniteValueError,
    RaggedRowError,
    TruncatedPayloadError,
)

CUBE_MAGIC = "HSICUBE1"
CUBE_DTYPE = "f32le"
_MAX_HEADER = 256


def write_cube(cube: HyperCube, path) -> None:
    h, w, b = cube.shape
    header = f"{CUBE_MAGIC} {h} {w} {b} {CUBE_DTYPE}\n".encode("ascii")
    payload = np.ascontiguousarray(np.transpose(cube.values, (2, 0, 1))).astype("<f4")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())


def read_cube(path) -> HyperCube:
    with open(path, "rb") as fh:
        raw = fh.read()
    nl = raw.find(b"\n", 0, _MAX_HEADER)
    if nl < 0:
        raise MagicMismatchError(f"{path}: no header line found")
    fields = raw[:nl].decode("ascii", errors="replace").split()
    if not fields or fields[0] != CUBE_MAGIC:
        got = fields[0] if fields else ""
        raise MagicMismatchError(f"{path}: expected magic {CUBE_MAGIC!r}, got {got!r}")
    if len(fields) != 5 or fields[4] != CUBE_DTYPE:
        raise FormatError(f"{path}: malformed header {raw[:nl]!r}")
    try:
        h, w, b = (int(f) for f in fields[1:4])
    except ValueError:
        raise FormatError(f"{path}: non-integer dimensions in header") from None
    if min(h, w, b) < 1 or max(h, w, b) >= 2 ** 32:
        raise FormatError(f"{path}: dimensions out of range: {h} {w} {b}")
    expected = 4 * h * w * b
    payload = raw[nl + 1 :]
    if len(payload) != expected:
        kind = "truncated" if len(payload) < expected else "oversized"
        raise TruncatedPayloadError(
            f"{path}: {kind} payload, expected {expected} bytes, got {len(payload)}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(b, h, w)
    if not np.all(np.isfinite(data)):
        raise NonFiniteValueError(f"{path}: payload contains NaN or Inf")
    return HyperCube(np.transpose(data, (1, 2, 0)).astype(np.float32))


def _grid_lines(grid: np.ndarray) -> List[str]:
    return [" ".join(str(int(v)) for v in row) for row in grid]


def _parse_grid(lines: List[str], start: int, h: int, w: int, path) -> np.ndarray:
    rows = []
    for i in range(h):
        lineno = start + i + 1
        if start + i >= len(lines):
            raise RaggedRowError(f"{path}: expected {h} rows, file ends at line {lineno - 1}")
        parts = lines[start + i].split()
        if len(parts) != w:
            raise RaggedRowError(
                f"{path}: line {lineno} has {len(parts)} entries, expected {w}"
            )
        try:
            rows.append([int(p) for p in parts])
        except ValueError:
            raise BadValueError(f"{path}: line {lineno} has a non-integer entry") from None
    extra = [ln for ln in lines[start + h :] if ln.strip()]
    if extra:
        raise RaggedRowError(f"{path}: unexpected content after {h} rows")
    return np.array(rows, dtype=np.int64).reshape(h, w)


def _parse_size(line: str, path):
    parts = line.split()
    if len(parts) != 2:
        raise FormatError(f"{path}: line 1 must be 'H W', got {line!r}")
    try:
        h, w = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"{path}: line 1 must be 'H W', got {line!r}") from None
    if h < 1 or w < 1:
        raise FormatError(f"{path}: dimensions must be positive")
    return h, w


def write_labels(labels: LabelMap, path) -> None:
    lines = [f"{labels.height} {labels.width}"] + _grid_lines(labels.labels)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_label_grid(path) -> np.ndarray:
    """Parse a label file into a raw integer grid without LabelMap validation."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file")
    h, w = _parse_size(lines[0], path)
    grid = _parse_grid(lines, 1, h, w, path)
    neg = np.argwhere(grid < 0)
    if neg.size:
        raise BadValueError(f"{path}: negative class id at line {neg[0][0] + 2}")
    return grid


def read_labels(path) -> LabelMap:
    return LabelMap(read_label_grid(path))


def write_split(split: SplitMask, path) -> None:
    h, w = split.shape
    lines = [f"{h} {w}", f"seed {split.seed}"] + _grid_lines(split.state)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_split(path, labels: Optional[LabelMap] = None) -> SplitMask:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 2:
        raise FormatError(f"{path}: missing size or seed line")
    h, w = _parse_size(lines[0], path)
    parts = lines[1].split()
    if len(parts) != 2 or parts[0] != "seed":
        raise FormatError(f"{path}: line 2 must be 'seed <int>'")
    try:
        seed = int(parts[1])
    except ValueError:
        raise FormatError(f"{path}: seed is not an integer") from None
    grid = _parse_grid(lines, 2, h, w, path)
    bad = np.argwhere(~np.isin(grid, (0, 1, 2)))
    if bad.size:
        y, x = bad[0]
        raise BadValueError(
            f"{path}: line {y + 3} column {x + 1} has value {grid[y, x]}, expected 0, 1 or 2"
        )
    return SplitMask(grid, seed=seed, labels=labels)


FEATURE_HEADER_PREFIX = ("y", "x")


def write_features(features: FeatureSet, path) -> None:
    """CSV with columns ``y,x,f0,...,f{D-1}``; floats written with repr precision."""
    cols = list(FEATURE_HEADER_PREFIX) + [f"f{i}" for i in range(features.dim)]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for (y, x), row in zip(features.coords, features.vectors):
            fh.write(f"{y},{x}," + ",".join(repr(float(v)) for v in row) + "\n")


def read_features(path) -> FeatureSet:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header[:2]) != FEATURE_HEADER_PREFIX:
            raise FormatError(f"{path}: feature CSV must start with columns y,x")
        dim = len(header) - 2
        coords, rows = [], []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != dim + 2:
                raise RaggedRowError(f"{path}: line {lineno} has {len(parts)} fields")
            try:
                coords.append((int(parts[0]), int(parts[1])))
                rows.append([float(p) for p in parts[2:]])
            except ValueError:
                raise BadValueError(f"{path}: line {lineno} is not numeric") from None
    return FeatureSet(
        np.array(rows, dtype=np.float64).reshape(len(rows), dim),
        np.array(coords, dtype=np.int64).reshape(len(coords), 2),
    )


def ensure_dir(path) -> None:
    os.makedirs(path, exist_ok=True)
