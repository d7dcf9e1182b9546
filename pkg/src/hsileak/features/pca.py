"""Principal components of the band covariance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datamodel import HyperCube
from ..errors import ConfigError, DataError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class PcaFit:
    mean: np.ndarray  # (B,)
    components: np.ndarray  # (B, B), column k is the k-th loading vector
    eigenvalues: np.ndarray  # (B,), descending

    @property
    def rank(self) -> int:
        top = self.eigenvalues[0] if self.eigenvalues.size else 0.0
        if top <= 0:
            return 0
        return int(np.count_nonzero(self.eigenvalues > RANK_TOL * top))


def pca_fit(samples: np.ndarray) -> PcaFit:
    """Eigen-decompose the covariance of (n, B) samples.

    Loadings are sorted by descending eigenvalue and signed so that each
    vector's largest-magnitude entry is positive.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DataError("PCA needs at least 2 samples")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / (x.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    lead = np.argmax(np.abs(evecs), axis=0)
    signs = np.sign(evecs[lead, np.arange(evecs.shape[1])])
    signs[signs == 0] = 1.0
    return PcaFit(mean, evecs * signs, evals)


def pca_project(cube: HyperCube, m: int) -> HyperCube:
    """Centered scores on the first ``m`` components, returned as an m-band cube."""
    if m < 1 or m > cube.bands:
        raise ConfigError(f"number of components must lie in 1..{cube.bands}, got {m}")
    flat = cube.values.reshape(-1, cube.bands)
    fit = pca_fit(flat)
    if m > fit.rank:
        raise DataError(f"covariance has rank {fit.rank}, cannot keep {m} components")
    scores = (flat - fit.mean) @ fit.components[:, :m]
    return HyperCube(scores.reshape(cube.height, cube.width, m))
