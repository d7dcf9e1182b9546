"""Sampling strategies and leakage diagnostics for hyperspectral classification.

Stratified random sampling draws training pixels uniformly within each class;
controlled random sampling grows one compact training region per connected
partition. The rest of the package supplies the pieces needed to measure the
difference: filters, spectral-spatial features, classifiers, accuracy
metrics, and overlap/correlation diagnostics.
"""

from .datamodel import (
    ConfusionMatrix,
    FeatureSet,
    HyperCube,
    LabelMap,
    PixelState,
    SplitMask,
    class_counts,
    spectrum_at,
)
from .errors import ConfigError, DataError, FormatError, HsiError
from .filters import GaussianSpec, WindowSpec, gaussian_filter, mean_filter
from .leakage import (
    correlation_decay,
    correlation_patch,
    overlap_rate,
    pairwise_window_overlap,
)
from .metrics import EvalReport, aggregate, confusion, evaluate, oa_aa_kappa
from .sampling import (
    SamplingPlan,
    Strategy,
    connected_partitions,
    controlled_random_split,
    split_summary,
    stratified_random_split,
)
from .synthgen import GridBlocks, SceneConfig, VoronoiBlobs, class_signatures, generate_scene

__version__ = "0.1.0"
