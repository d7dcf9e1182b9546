"""Random forest of CART trees grown with Gini impurity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..errors import ConfigError
from ..rng import stream
from ._common import as_labels, as_matrix, check_dim, vote

LEAF = -1


@dataclass(frozen=True, eq=False)
class Tree:
    """Flat binary tree; ``feature[i] == LEAF`` marks a leaf predicting ``value[i]``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # class index into the forest's ``classes``

    @property
    def node_count(self) -> int:
        return self.feature.size

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row."""
        node = np.zeros(x.shape[0], dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            idx = np.flatnonzero(active)
            f = self.feature[node[idx]]
            go_left = x[idx, f] <= self.threshold[node[idx]]
            node[idx] = np.where(go_left, self.left[node[idx]], self.right[node[idx]])
            active = self.feature[node] != LEAF
        return node

    def predict_index(self, x: np.ndarray) -> np.ndarray:
        return self.value[self.apply(x)]


@dataclass(frozen=True, eq=False)
class ForestModel:
    classes: np.ndarray
    trees: List[Tree]
    dim: int

    def predict(self, features) -> np.ndarray:
        return rf_predict(self, features)


def _gini_best_split(x: np.ndarray, yi: np.ndarray, n_classes: int, candidates):
    """Lowest weighted Gini split over the candidate features, or None."""
    n = yi.size
    best = None
    for f in candidates:
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), yi[order]] = 1.0
        left = np.cumsum(onehot, axis=0)[:-1]
        right = left[-1] + onehot[-1] - left
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        score = (nl * gini_l + nr * gini_r) / n
        valid = xs[1:] > xs[:-1]
        if not valid.any():
            continue
        score = np.where(valid, score, np.inf)
        pos = int(np.argmin(score))
        if best is None or score[pos] < best[0]:
            best = (score[pos], f, 0.5 * (xs[pos] + xs[pos + 1]))
    return best


def grow_tree(x: np.ndarray, yi: np.ndarray, n_classes: int, max_features: int,
              max_depth: Optional[int], rng) -> Tree:
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        counts = np.bincount(yi[rows], minlength=n_classes)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(int(np.argmax(counts)))
        return len(feature) - 1, counts

    root, counts = new_node(np.arange(yi.size))
    stack = [(root, np.arange(yi.size), 0, counts)]
    d = x.shape[1]
    while stack:
        node, rows, depth, counts = stack.pop()
        if np.count_nonzero(counts) <= 1 or rows.size < 2:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        cand = rng.choice(d, size=max_features, replace=False)
        split = _gini_best_split(x[rows], yi[rows], n_classes, cand)
        if split is None:
            continue
        _, f, thr = split
        mask = x[rows, f] <= thr
        lrows, rrows = rows[mask], rows[~mask]
        ln, lc = new_node(lrows)
        rn, rc = new_node(rrows)
        feature[node], threshold[node], left[node], right[node] = int(f), float(thr), ln, rn
        stack.append((rn, rrows, depth + 1, rc))
        stack.append((ln, lrows, depth + 1, lc))
    return Tree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=np.int64),
    )


def rf_train(features, labels, trees: int = 100, max_depth: Optional[int] = None,
             seed: int = 0) -> ForestModel:
    """Bagged CART trees, each node choosing among ceil(sqrt(D)) random features."""
    x = as_matrix(features)
    y = as_labels(labels, x.shape[0])
    if trees < 1:
        raise ConfigError("trees must be >= 1")
    if max_depth is not None and max_depth < 1:
        raise ConfigError("max_depth must be >= 1 or None")
    classes = np.unique(y)
    yi = np.searchsorted(classes, y)
    n, d = x.shape
    max_features = int(math.ceil(math.sqrt(d)))
    forest = []
    for t in range(trees):
        rng = stream(seed, t)
        boot = rng.integers(0, n, size=n)
        forest.append(grow_tree(x[boot], yi[boot], classes.size, max_features, max_depth, rng))
    return ForestModel(classes, forest, d)


def rf_predict(model: ForestModel, features) -> np.ndarray:
    """Majority vote of the trees; ties go to the smallest class id."""
    x = as_matrix(features)
    check_dim(x, model.dim)
    counts = np.zeros((x.shape[0], model.classes.size), dtype=np.int64)
    rows = np.arange(x.shape[0])
    for tree in model.trees:
        np.add.at(counts, (rows, tree.predict_index(x)), 1)
    return vote(counts, model.classes)
