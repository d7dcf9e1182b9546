"""Stratified k-fold model selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from ..errors import ConfigError, DataError
from ..rng import stream
from ._common import as_labels, as_matrix
from .forest import rf_predict, rf_train
from .knn import knn_predict, knn_train
from .svm import svm_predict, svm_train

DEFAULT_COST_GRID = (0.01, 0.1, 1.0, 10.0)


def _fit(kind: str, x, y, params: Dict[str, Any], seed: int):
    if kind == "knn":
        return knn_train(x, y, **params)
    if kind == "svm":
        return svm_train(x, y, seed=seed, **params)
    if kind == "rf":
        return rf_train(x, y, seed=seed, **params)
    raise ConfigError(f"unknown classifier kind {kind!r}")


def fit(kind: str, features, labels, params: Dict[str, Any], seed: int = 0):
    return _fit(kind, as_matrix(features), labels, params, seed)


@dataclass(frozen=True)
class CvGrid:
    kind: str
    candidates: Sequence[Dict[str, Any]]
    folds: int = 5

    def __post_init__(self):
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if not self.candidates:
            raise ConfigError("grid needs at least one candidate")

    @classmethod
    def svm_costs(cls, costs=DEFAULT_COST_GRID, epochs: int = 20, folds: int = 5) -> "CvGrid":
        return cls("svm", [{"cost": float(c), "epochs": epochs} for c in costs], folds)


@dataclass(frozen=True)
class CvResult:
    best: Dict[str, Any]
    mean_scores: List[float]
    fold_scores: List[List[float]] = field(repr=False)


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Fold index per row; each class is shuffled then dealt round-robin."""
    fold = np.empty(labels.size, dtype=np.int64)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.size < folds:
            raise DataError(f"class {c} has {idx.size} rows, fewer than {folds} folds")
        perm = stream(seed, 0xCF, int(c)).permutation(idx.size)
        fold[idx[perm]] = np.arange(idx.size) % folds
    return fold


def cross_validate(features, labels, grid: CvGrid, seed: int = 0) -> CvResult:
    """Pick the candidate with the best mean fold accuracy; ties keep grid order."""
    x = as_matrix(features)
    y = as_labels(labels, x.shape[0])
    fold = stratified_folds(y, grid.folds, seed)
    fold_scores = []
    for params in grid.candidates:
        scores = []
        for k in range(grid.folds):
            tr, te = fold != k, fold == k
            model = _fit(grid.kind, x[tr], y[tr], dict(params), seed)
            scores.append(float(np.mean(model.predict(x[te]) == y[te])))
        fold_scores.append(scores)
    means = [float(np.mean(s)) for s in fold_scores]
    best = int(np.argmax(means))
    return CvResult(dict(grid.candidates[best]), means, fold_scores)
