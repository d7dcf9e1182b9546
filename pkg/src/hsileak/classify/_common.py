from __future__ import annotations

import numpy as np

from ..datamodel import FeatureSet
from ..errors import DataError


def as_matrix(features) -> np.ndarray:
    if isinstance(features, FeatureSet):
        return features.vectors
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"feature matrix must be 2-D, got shape {x.shape}")
    return x


def as_labels(labels, n: int) -> np.ndarray:
    y = np.asarray(labels).astype(np.int64).ravel()
    if y.shape[0] != n:
        raise DataError(f"{n} feature rows but {y.shape[0]} labels")
    if y.size and y.min() < 1:
        raise DataError("training labels must be class ids >= 1")
    return y


def check_dim(x: np.ndarray, dim: int) -> None:
    if x.shape[1] != dim:
        raise DataError(f"model expects {dim} features, got {x.shape[1]}")


def vote(counts: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Majority class per row of a (n, C) count matrix; ties go to the smallest id."""
    return classes[np.argmax(counts, axis=1)]
