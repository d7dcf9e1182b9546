from .dwt import DwtSpec, dwt3d_features, dwt3d_map, haar_pair, packet_tree
from .morphology import (
    EmpSpec,
    disk,
    emp_features,
    emp_map,
    morph_close,
    morph_open,
    close_by_reconstruction,
    morphological_profile,
    open_by_reconstruction,
)
from .pca import PcaFit, pca_fit, pca_project
from .spectral import raw_spectral, spatial_coords, spatial_coords_map

__all__ = [
    "DwtSpec", "EmpSpec", "PcaFit",
    "disk", "dwt3d_features", "dwt3d_map", "emp_features", "emp_map", "haar_pair",
    "close_by_reconstruction", "morph_close", "morph_open", "morphological_profile",
    "open_by_reconstruction", "packet_tree",
    "pca_fit", "pca_project", "raw_spectral", "spatial_coords", "spatial_coords_map",
]
