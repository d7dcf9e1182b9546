"""Brute-force k-nearest-neighbour classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ._common import as_labels, as_matrix, check_dim, vote

_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class KnnModel:
    k: int
    rows: np.ndarray
    targets: np.ndarray
    classes: np.ndarray

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def predict(self, features) -> np.ndarray:
        return knn_predict(self, features)


def knn_train(features, labels, k: int = 1) -> KnnModel:
    x = as_matrix(features)
    y = as_labels(labels, x.shape[0])
    if k < 1 or k > x.shape[0]:
        raise ConfigError(f"k must lie in 1..{x.shape[0]}, got {k}")
    return KnnModel(int(k), x.copy(), y.copy(), np.unique(y))


def knn_predict(model: KnnModel, features) -> np.ndarray:
    """Majority label of the k closest training rows (Euclidean).

    Equal distances keep training-row order; equal vote counts go to the
    smallest class id.
    """
    q = as_matrix(features)
    check_dim(q, model.dim)
    n_train = model.rows.shape[0]
    cls_index = np.searchsorted(model.classes, model.targets)
    chunk = max(1, _CHUNK_ELEMENTS // max(1, n_train * model.dim))
    out = np.empty(q.shape[0], dtype=np.int64)
    for s in range(0, q.shape[0], chunk):
        block = q[s : s + chunk]
        d = ((block[:, None, :] - model.rows[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d, axis=1, kind="stable")[:, : model.k]
        counts = np.zeros((block.shape[0], model.classes.size), dtype=np.int64)
        rows = np.repeat(np.arange(block.shape[0]), model.k)
        np.add.at(counts, (rows, cls_index[nearest].ravel()), 1)
        out[s : s + chunk] = vote(counts, model.classes)
    return out
