from __future__ import annotations

import numpy as np

from ..datamodel import FeatureSet, LabelMap, SplitMask
from ..errors import DataError


def selection_coords(selection, shape) -> np.ndarray:
    """(n, 2) pixel coordinates in scanline order.

    ``selection`` may be a boolean (H, W) mask, a LabelMap (labeled pixels),
    a SplitMask (non-excluded pixels) or an explicit (n, 2) coordinate array.
    """
    if isinstance(selection, LabelMap):
        mask = selection.labels > 0
    elif isinstance(selection, SplitMask):
        mask = selection.state > 0
    else:
        arr = np.asarray(selection)
        if arr.dtype == bool:
            mask = arr
        else:
            crd = arr.astype(np.int64).reshape(-1, 2)
            if crd.size == 0:
                raise DataError("empty pixel selection")
            if (crd < 0).any() or (crd[:, 0] >= shape[0]).any() or (crd[:, 1] >= shape[1]).any():
                raise DataError("selected pixel out of bounds")
            return crd
    if mask.shape != tuple(shape):
        raise DataError(f"selection mask {mask.shape} does not match image {tuple(shape)}")
    crd = np.argwhere(mask)
    if crd.size == 0:
        raise DataError("empty pixel selection")
    return crd


def gather(feature_map: np.ndarray, selection) -> FeatureSet:
    """Rows of an (H, W, D) feature map at the selected pixels."""
    crd = selection_coords(selection, feature_map.shape[:2])
    return FeatureSet(feature_map[crd[:, 0], crd[:, 1], :], crd, shape_hw=feature_map.shape[:2])
