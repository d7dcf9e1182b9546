"""Core value types: cubes, label maps, splits, feature sets, confusion matrices.

All arrays are indexed ``(y, x[, band])`` in row-major order and are made
read-only on construction, so instances can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, Optional

import numpy as np

from .errors import DataError

MAX_CLASS_ID = 65535


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class PixelState(IntEnum):
    EXCLUDED = 0
    TRAIN = 1
    TEST = 2


@dataclass(frozen=True, eq=False)
class HyperCube:
    """H x W x B array of spectral responses."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 3:
            raise DataError(f"cube must be 3-D (y, x, band), got shape {v.shape}")
        if min(v.shape) < 1:
            raise DataError(f"cube dimensions must be >= 1, got {v.shape}")
        if not np.issubdtype(v.dtype, np.floating):
            v = v.astype(np.float64)
        if not np.all(np.isfinite(v)):
            raise DataError("cube contains NaN or Inf values")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def bands(self) -> int:
        return self.values.shape[2]

    @property
    def shape(self):
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, HyperCube):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Integer class map; 0 is unlabeled, classes are 1..C with none missing."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 2 or min(lab.shape) < 1:
            raise DataError(f"label map must be a non-empty 2-D array, got shape {lab.shape}")
        if not np.issubdtype(lab.dtype, np.integer):
            if np.issubdtype(lab.dtype, np.floating) and np.all(lab == np.round(lab)):
                lab = lab.astype(np.int64)
            else:
                raise DataError("labels must be integers")
        if lab.min() < 0 or lab.max() > MAX_CLASS_ID:
            raise DataError(f"class ids must lie in 0..{MAX_CLASS_ID}")
        present = np.unique(lab[lab > 0])
        if present.size and not np.array_equal(present, np.arange(1, present.size + 1)):
            missing = sorted(set(range(1, int(present.max()) + 1)) - set(present.tolist()))
            raise DataError(f"class ids must be contiguous from 1; missing {missing}")
        object.__setattr__(self, "labels", _frozen(lab.astype(np.int32)))

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def shape(self):
        return self.labels.shape

    @property
    def n_classes(self) -> int:
        return int(self.labels.max())

    def check_matches(self, cube: HyperCube) -> None:
        if (cube.height, cube.width) != self.shape:
            raise DataError(
                f"label map {self.shape} does not match cube {(cube.height, cube.width)}"
            )

    def __eq__(self, other):
        if not isinstance(other, LabelMap):
            return NotImplemented
        return bool(np.array_equal(self.labels, other.labels))


@dataclass(frozen=True, eq=False)
class SplitMask:
    """Per-pixel Train/Test/Excluded designation plus the seed that produced it.

    Passing ``labels`` validates that Train and Test occur only on labeled
    pixels and that every unlabeled pixel is Excluded.
    """

    state: np.ndarray
    seed: int = 0
    labels: Optional[LabelMap] = field(default=None, repr=False)

    def __post_init__(self):
        st = np.asarray(self.state)
        if st.ndim != 2:
            raise DataError(f"split state must be 2-D, got shape {st.shape}")
        if st.size and not np.isin(st, (0, 1, 2)).all():
            raise DataError("split state values must be 0 (excluded), 1 (train) or 2 (test)")
        st = _frozen(st.astype(np.uint8))
        object.__setattr__(self, "state", st)
        object.__setattr__(self, "seed", int(self.seed))
        if self.labels is not None:
            if self.labels.shape != st.shape:
                raise DataError(f"split {st.shape} does not match labels {self.labels.shape}")
            unlabeled = self.labels.labels == 0
            if np.any(st[unlabeled] != PixelState.EXCLUDED):
                raise DataError("Train/Test state assigned to an unlabeled pixel")
            if np.any(st[~unlabeled] == PixelState.EXCLUDED):
                raise DataError("labeled pixel left Excluded")

    @property
    def shape(self):
        return self.state.shape

    @property
    def train(self) -> np.ndarray:
        return self.state == PixelState.TRAIN

    @property
    def test(self) -> np.ndarray:
        return self.state == PixelState.TEST

    def __eq__(self, other):
        if not isinstance(other, SplitMask):
            return NotImplemented
        return self.seed == other.seed and bool(np.array_equal(self.state, other.state))


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Per-pixel feature rows, each tagged with its (y, x) origin."""

    vectors: np.ndarray
    coords: np.ndarray
    shape_hw: Optional[tuple] = None

    def __post_init__(self):
        vec = np.asarray(self.vectors, dtype=np.float64)
        crd = np.asarray(self.coords, dtype=np.int64)
        if vec.ndim != 2:
            raise DataError(f"feature vectors must be 2-D, got shape {vec.shape}")
        if crd.shape != (vec.shape[0], 2):
            raise DataError(f"coords must have shape ({vec.shape[0]}, 2), got {crd.shape}")
        if not np.all(np.isfinite(vec)):
            raise DataError("feature vectors contain NaN or Inf")
        if crd.size:
            if crd.min() < 0:
                raise DataError("negative pixel coordinate")
            if self.shape_hw is not None and (
                crd[:, 0].max() >= self.shape_hw[0] or crd[:, 1].max() >= self.shape_hw[1]
            ):
                raise DataError("pixel coordinate out of bounds")
            if np.unique(crd, axis=0).shape[0] != crd.shape[0]:
                raise DataError("duplicate pixel coordinates")
        object.__setattr__(self, "vectors", _frozen(vec))
        object.__setattr__(self, "coords", _frozen(crd))

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FeatureSet):
            return NotImplemented
        return bool(
            np.array_equal(self.vectors, other.vectors)
            and np.array_equal(self.coords, other.coords)
        )


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """C x C counts; rows are truth, columns are prediction, class c at index c-1."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DataError(f"confusion matrix must be square, got {c.shape}")
        if c.size and (c.min() < 0 or not np.all(c == np.round(c))):
            raise DataError("confusion counts must be non-negative integers")
        object.__setattr__(self, "counts", _frozen(c.astype(np.int64)))

    @property
    def classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def class_counts(labels: LabelMap) -> Dict[int, int]:
    """Number of pixels per class id, ignoring unlabeled pixels."""
    ids, counts = np.unique(labels.labels[labels.labels > 0], return_counts=True)
    return {int(i): int(n) for i, n in zip(ids, counts)}


def spectrum_at(cube: HyperCube, y: int, x: int) -> np.ndarray:
    if not (0 <= y < cube.height and 0 <= x < cube.width):
        raise IndexError(f"pixel ({y}, {x}) outside {cube.height}x{cube.width} cube")
    return cube.values[y, x, :].copy()
