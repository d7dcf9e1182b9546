"""Features with no spatial processing: the raw spectrum and pixel position."""

from __future__ import annotations

import numpy as np

from ..datamodel import FeatureSet, HyperCube
from ._select import gather, selection_coords


def raw_spectral(cube: HyperCube, selection) -> FeatureSet:
    return gather(cube.values, selection)


def spatial_coords_map(height: int, width: int) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    yy /= max(height - 1, 1)
    xx /= max(width - 1, 1)
    return np.stack([yy, xx], axis=-1)


def spatial_coords(cube: HyperCube, selection) -> FeatureSet:
    """(y, x) scaled to [0, 1] by the image extent; no spectral content."""
    crd = selection_coords(selection, (cube.height, cube.width))
    return gather(spatial_coords_map(cube.height, cube.width), crd)
