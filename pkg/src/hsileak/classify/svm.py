"""One-vs-rest linear SVM trained by stochastic subgradient descent.

Each binary problem minimises ``lam/2 * |w|^2 + mean(max(0, 1 - y * w.x))``
with ``lam = 1 / (cost * n)``. At step ``t`` the weights shrink by
``1 - 1/t`` and every class whose margin on the current sample is below 1
moves by ``y * x / (lam * t)``. Features are standardised with the training
mean and standard deviation and a constant 1 is appended for the bias. The
returned weights are the running average of every iterate, which makes the
objective recorded after each epoch settle without epoch-to-epoch jitter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..errors import ConfigError, DataError
from ..rng import stream
from ._common import as_labels, as_matrix, check_dim

DEFAULT_EPOCHS = 20


@dataclass(frozen=True, eq=False)
class SvmModel:
    classes: np.ndarray
    weights: np.ndarray  # (C, D + 1), last column is the bias
    mean: np.ndarray
    scale: np.ndarray
    lam: float
    history: List[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def decision_function(self, features) -> np.ndarray:
        x = as_matrix(features)
        check_dim(x, self.dim)
        return _augment((x - self.mean) / self.scale) @ self.weights.T

    def predict(self, features) -> np.ndarray:
        return svm_predict(self, features)


def _augment(z: np.ndarray) -> np.ndarray:
    return np.hstack([z, np.ones((z.shape[0], 1))])


def svm_objective(weights: np.ndarray, z: np.ndarray, signs: np.ndarray, lam: float) -> np.ndarray:
    """Per-class regularised hinge objective on augmented inputs ``z``."""
    margins = signs * (z @ weights.T)
    hinge = np.maximum(0.0, 1.0 - margins).mean(axis=0)
    return 0.5 * lam * (weights ** 2).sum(axis=1) + hinge


def svm_train(features, labels, cost: float = 1.0, epochs: int = DEFAULT_EPOCHS,
              seed: int = 0) -> SvmModel:
    x = as_matrix(features)
    y = as_labels(labels, x.shape[0])
    if cost <= 0:
        raise ConfigError(f"cost must be > 0, got {cost}")
    if epochs < 1:
        raise ConfigError("epochs must be >= 1")
    classes = np.unique(y)
    if classes.size < 2:
        raise DataError("linear SVM needs at least 2 classes in the training set")
    n = x.shape[0]
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale == 0] = 1.0
    z = _augment((x - mean) / scale)
    signs = np.where(y[:, None] == classes[None, :], 1.0, -1.0)
    lam = 1.0 / (cost * n)
    rng = stream(seed, 0x5F)
    w = np.zeros((classes.size, z.shape[1]))
    t = 0
    history = []
    total = np.zeros_like(w)
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            zi, si = z[i], signs[i]
            viol = si * (w @ zi) < 1.0
            w *= 1.0 - 1.0 / t
            if viol.any():
                w[viol] += (si[viol] / (lam * t))[:, None] * zi
            total += w
        history.append(svm_objective(total / t, z, signs, lam))
    return SvmModel(classes, total / t, mean, scale, lam, history)


def svm_predict(model: SvmModel, features) -> np.ndarray:
    """Class with the largest one-vs-rest score; ties go to the smallest id."""
    return model.classes[np.argmax(model.decision_function(features), axis=1)]
