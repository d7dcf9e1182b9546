"""Train/test dependence diagnostics: window overlap and spectral correlation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .datamodel import HyperCube, SplitMask
from .errors import ConfigError, DataError


def _check_odd(w: int) -> None:
    if w < 1 or w % 2 == 0:
        raise ConfigError(f"window must be odd and >= 1, got {w}")


def pairwise_window_overlap(w: int, offset) -> float:
    """Shared fraction of two w x w windows whose centres differ by ``offset``."""
    _check_odd(w)
    dy, dx = (abs(int(v)) for v in offset)
    return max(0, w - dy) * max(0, w - dx) / (w * w)


def dilate_square(mask: np.ndarray, w: int) -> np.ndarray:
    """Pixels within Chebyshev distance (w-1)/2 of any True pixel."""
    r = w // 2
    if r == 0:
        return mask.copy()
    h, wd = mask.shape
    p = np.pad(mask, r)
    rows = np.zeros((h + 2 * r, wd), dtype=bool)
    for dx in range(2 * r + 1):
        rows |= p[:, dx : dx + wd]
    out = np.zeros((h, wd), dtype=bool)
    for dy in range(2 * r + 1):
        out |= rows[dy : dy + h]
    return out


def overlap_rate(split: SplitMask, w: int) -> float:
    """Fraction of Test pixels inside the w x w window of some Train pixel."""
    _check_odd(w)
    test = split.test
    n_test = int(test.sum())
    if n_test == 0:
        raise DataError("split has no test pixels")
    covered = dilate_square(split.train, w) & test
    return int(covered.sum()) / n_test


@dataclass(frozen=True)
class OverlapCurve:
    window_sizes: tuple
    rates: tuple
    values: np.ndarray  # (len(rates), len(window_sizes))


def overlap_curve(splits_by_rate, window_sizes: Sequence[int]) -> OverlapCurve:
    """Overlap rate for each (rate, window); ``splits_by_rate`` maps rate -> split."""
    rates = tuple(sorted(splits_by_rate))
    vals = np.array([[overlap_rate(splits_by_rate[r], w) for w in window_sizes] for r in rates])
    return OverlapCurve(tuple(window_sizes), rates, vals)


def _unit_spectra(cube: HyperCube):
    """Mean-centred spectra scaled so a dot product is the Pearson correlation."""
    v = cube.values.astype(np.float64)
    v = v - v.mean(axis=2, keepdims=True)
    norm = np.sqrt((v ** 2).sum(axis=2))
    # spread below float rounding of the mean counts as a constant spectrum
    scale = np.abs(cube.values).max(axis=2) * np.sqrt(cube.bands) * 1e-12
    valid = norm > scale
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(valid[..., None], v / norm[..., None], 0.0)
    return u, valid


def _mean_rho_at(u, valid, dy: int, dx: int) -> float:
    h, w = valid.shape
    ys, ye = max(0, -dy), min(h, h - dy)
    xs, xe = max(0, -dx), min(w, w - dx)
    if ys >= ye or xs >= xe:
        return float("nan")
    a = u[ys:ye, xs:xe]
    b = u[ys + dy : ye + dy, xs + dx : xe + dx]
    ok = valid[ys:ye, xs:xe] & valid[ys + dy : ye + dy, xs + dx : xe + dx]
    if not ok.any():
        return float("nan")
    rho = np.clip((a * b).sum(axis=2), -1.0, 1.0)
    return float(rho[ok].mean())


def correlation_patch(cube: HyperCube, radius: int) -> np.ndarray:
    """Mean spectral correlation between each pixel and its neighbour at every offset.

    Entry ``[radius + dy, radius + dx]`` averages, over all pixels whose
    neighbour at ``(dy, dx)`` is inside the image, the Pearson correlation of
    the two spectra. Constant spectra are left out; an offset with no valid
    pair is NaN.
    """
    if radius < 1:
        raise ConfigError("radius must be >= 1")
    u, valid = _unit_spectra(cube)
    size = 2 * radius + 1
    patch = np.empty((size, size))
    for i, dy in enumerate(range(-radius, radius + 1)):
        for j, dx in enumerate(range(-radius, radius + 1)):
            patch[i, j] = _mean_rho_at(u, valid, dy, dx)
    if valid.any():
        patch[radius, radius] = 1.0
    return patch


@dataclass(frozen=True)
class CorrelationCurve:
    lags: np.ndarray
    rho: np.ndarray


def correlation_decay(cube: HyperCube, axis: str = "x", max_lag: int = 4) -> CorrelationCurve:
    """Mean correlation at lags 0..max_lag along +x (columns) or +y (rows)."""
    axis = axis.lower()
    if axis not in ("x", "y"):
        raise ConfigError(f"axis must be 'x' or 'y', got {axis!r}")
    extent = cube.width if axis == "x" else cube.height
    if not 0 <= max_lag < extent:
        raise ConfigError(f"max_lag must lie in 0..{extent - 1}")
    u, valid = _unit_spectra(cube)
    rho = np.empty(max_lag + 1)
    for lag in range(max_lag + 1):
        dy, dx = (0, lag) if axis == "x" else (lag, 0)
        rho[lag] = _mean_rho_at(u, valid, dy, dx)
    if valid.any():
        rho[0] = 1.0
    return CorrelationCurve(np.arange(max_lag + 1), rho)
