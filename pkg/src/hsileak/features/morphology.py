"""Grayscale morphology with disk structuring elements and the extended profile."""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from ..datamodel import FeatureSet, HyperCube
from ..errors import ConfigError
from ._select import gather
from .pca import pca_project


def disk(radius: int) -> np.ndarray:
    """Discrete disk ``{(dy, dx): dy**2 + dx**2 <= radius**2}`` as a boolean mask."""
    if radius < 0:
        raise ConfigError("radius must be >= 0")
    r = int(radius)
    yy, xx = np.mgrid[-r : r + 1, -r : r + 1]
    return yy * yy + xx * xx <= r * r


def _rank_filter(plane: np.ndarray, se: np.ndarray, op) -> np.ndarray:
    r = se.shape[0] // 2
    h, w = plane.shape
    p = np.pad(plane, r, mode="edge")
    out = None
    for dy, dx in np.argwhere(se):
        view = p[dy : dy + h, dx : dx + w]
        out = view.copy() if out is None else op(out, view)
    return out


def erode(plane: np.ndarray, radius: int) -> np.ndarray:
    return _rank_filter(np.asarray(plane, dtype=np.float64), disk(radius), np.minimum)


def dilate(plane: np.ndarray, radius: int) -> np.ndarray:
    return _rank_filter(np.asarray(plane, dtype=np.float64), disk(radius), np.maximum)


def morph_open(plane: np.ndarray, radius: int) -> np.ndarray:
    if radius < 1:
        raise ConfigError("radius must be >= 1")
    return dilate(erode(plane, radius), radius)


def morph_close(plane: np.ndarray, radius: int) -> np.ndarray:
    if radius < 1:
        raise ConfigError("radius must be >= 1")
    return erode(dilate(plane, radius), radius)


def _reconstruct(marker: np.ndarray, mask: np.ndarray, dilation: bool) -> np.ndarray:
    # geodesic reconstruction with 8-connectivity, iterated to stability
    step, bound = (np.maximum, np.minimum) if dilation else (np.minimum, np.maximum)
    square = np.ones((3, 3), bool)
    cur = bound(marker, mask)
    while True:
        nxt = bound(_rank_filter(cur, square, step), mask)
        if np.array_equal(nxt, cur):
            return cur
        cur = nxt


def open_by_reconstruction(plane: np.ndarray, radius: int) -> np.ndarray:
    """Erode by a disk, then rebuild by geodesic dilation under the original plane.

    Bright structures the disk cannot fit into are removed; everything else
    keeps its exact shape. Unlike plain opening, this is monotone in the
    radius for any nested family of disks.
    """
    plane = np.asarray(plane, dtype=np.float64)
    return _reconstruct(erode(plane, radius), plane, dilation=True)


def close_by_reconstruction(plane: np.ndarray, radius: int) -> np.ndarray:
    plane = np.asarray(plane, dtype=np.float64)
    return _reconstruct(dilate(plane, radius), plane, dilation=False)


def morphological_profile(plane: np.ndarray, n: int) -> np.ndarray:
    """Stack ``[open_n, ..., open_1, plane, close_1, ..., close_n]`` on a last axis.

    Openings and closings are by reconstruction, so entries are ordered
    pointwise from the largest opening up to the largest closing.
    """
    plane = np.asarray(plane, dtype=np.float64)
    opens = [open_by_reconstruction(plane, r) for r in range(n, 0, -1)]
    closes = [close_by_reconstruction(plane, r) for r in range(1, n + 1)]
    return np.stack(opens + [plane] + closes, axis=-1)


@dataclass(frozen=True)
class EmpSpec:
    pca_components: int = 3
    max_se_radius: int = 4
    stack_spectral: bool = True

    def __post_init__(self):
        if self.pca_components < 1:
            raise ConfigError("pca_components must be >= 1")
        if self.max_se_radius < 1:
            raise ConfigError("max_se_radius must be >= 1")
        if not self.stack_spectral:
            raise ConfigError("the spectral stack is always included")

    def dim(self, bands: int) -> int:
        return self.pca_components * (2 * self.max_se_radius + 1) + bands


def emp_map(cube: HyperCube, spec: EmpSpec = EmpSpec()) -> np.ndarray:
    scores = pca_project(cube, spec.pca_components).values
    profiles = [morphological_profile(scores[:, :, k], spec.max_se_radius)
                for k in range(spec.pca_components)]
    return np.concatenate(profiles + [cube.values.astype(np.float64)], axis=2)


def emp_features(cube: HyperCube, selection, spec: EmpSpec = EmpSpec()) -> FeatureSet:
    """Morphological profiles of the leading principal components plus the raw spectrum."""
    return gather(emp_map(cube, spec), selection)
