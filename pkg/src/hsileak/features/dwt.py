"""Undecimated 3-D Haar wavelet-packet features.

Along each axis (x, y, band) the cube goes through a 3-level undecimated
Haar packet tree. Level ``k`` compares samples ``2**k`` apart::

    low[i]  = (s[i] + s[i + d]) / 2
    high[i] = (s[i] - s[i + d]) / 2

with ``s[i + d]`` clamped to the last sample, so ``low + high == s`` exactly
and constants pass through the low branch unchanged. All 15 tree nodes
(root, 2, 4 and 8 children) are kept, each is smoothed by a 3x3 spatial
mean, and the 45 resulting sub-cubes are concatenated per pixel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from ..datamodel import FeatureSet, HyperCube
from ..errors import ConfigError, DataError
from ..filters import box_mean_2d
from ._select import gather

AXES = ("x", "y", "band")
_AXIS_INDEX = {"y": 0, "x": 1, "band": 2}


@dataclass(frozen=True)
class DwtSpec:
    levels: int = 3
    wavelet: str = "haar"

    def __post_init__(self):
        if self.levels != 3:
            raise ConfigError("only 3-level decompositions are supported")
        if self.wavelet != "haar":
            raise ConfigError(f"unsupported wavelet {self.wavelet!r}")

    @property
    def subcube_count(self) -> int:
        return 2 ** (self.levels + 1) - 1

    @property
    def min_extent(self) -> int:
        return 2 ** self.levels


def haar_pair(s: np.ndarray, axis: int, shift: int):
    """Undecimated Haar low/high pair along ``axis`` with edge clamping."""
    n = s.shape[axis]
    idx = np.minimum(np.arange(n) + shift, n - 1)
    nb = np.take(s, idx, axis=axis)
    return (s + nb) / 2.0, (s - nb) / 2.0


def packet_tree(s: np.ndarray, axis: int, levels: int = 3) -> List[np.ndarray]:
    """All nodes of the packet tree in breadth-first order, root first."""
    nodes = [s]
    ring = [s]
    for k in range(levels):
        nxt = []
        for node in ring:
            nxt.extend(haar_pair(node, axis, 2 ** k))
        nodes.extend(nxt)
        ring = nxt
    return nodes


def dwt3d_map(cube: HyperCube, spec: DwtSpec = DwtSpec()) -> np.ndarray:
    h, w, b = cube.shape
    m = spec.min_extent
    if min(h, w, b) < m:
        raise DataError(
            f"3-D DWT needs height, width and bands >= {m}; got {h}x{w}x{b}"
        )
    v = cube.values.astype(np.float64)
    blocks = []
    for name in AXES:
        for node in packet_tree(v, _AXIS_INDEX[name], spec.levels):
            blocks.append(box_mean_2d(node, 3, 3))
    return np.concatenate(blocks, axis=2)


def dwt3d_features(cube: HyperCube, selection, spec: DwtSpec = DwtSpec()) -> FeatureSet:
    """Per-pixel concatenation of the 45 smoothed sub-cubes, D = 45 * bands."""
    return gather(dwt3d_map(cube, spec), selection)
