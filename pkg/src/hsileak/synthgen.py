"""Synthetic hyperspectral scenes with spatially clustered classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .datamodel import HyperCube, LabelMap
from .errors import ConfigError
from .rng import stream

MAX_SIGNATURE_ATTEMPTS = 100


@dataclass(frozen=True)
class VoronoiBlobs:
    """Irregular regions: each class owns ``seeds_per_class`` Voronoi cells."""

    seeds_per_class: int = 4


@dataclass(frozen=True)
class GridBlocks:
    """Square blocks of ``block_size`` pixels with a fixed class pattern.

    Block ``(i, j)`` gets class ``(a*i + j) mod C + 1`` with ``a = 2`` when
    ``C >= 4`` and ``a = 1`` otherwise. For ``C >= 4`` no two blocks of the same
    class touch, even diagonally, so every block is its own 8-connected
    partition. With ``C = 2`` the pattern is a checkerboard.
    """

    block_size: int = 8


Layout = Union[VoronoiBlobs, GridBlocks]


@dataclass(frozen=True)
class SceneConfig:
    height: int = 64
    width: int = 64
    bands: int = 16
    classes: int = 4
    layout: Layout = VoronoiBlobs()
    signature_separation: float = 1.0
    noise_sigma: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if self.classes < 2:
            raise ConfigError("a scene needs at least 2 classes")
        if self.height < 1 or self.width < 1 or self.bands < 1:
            raise ConfigError("height, width and bands must be >= 1")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        if not self.signature_separation > 0:
            raise ConfigError("signature_separation must be > 0")
        if isinstance(self.layout, VoronoiBlobs) and self.layout.seeds_per_class < 1:
            raise ConfigError("seeds_per_class must be >= 1")
        if isinstance(self.layout, GridBlocks) and self.layout.block_size < 1:
            raise ConfigError("block_size must be >= 1")


def _min_pairwise_distance(sig: np.ndarray) -> float:
    diff = sig[:, None, :] - sig[None, :, :]
    d = np.sqrt((diff ** 2).sum(-1))
    d[np.diag_indices(len(sig))] = np.inf
    return float(d.min())


def class_signatures(config: SceneConfig) -> np.ndarray:
    """Mean spectrum per class, shape (C, B), pairwise L2 distance >= separation.

    Signatures are drawn uniformly in [0, 1]^B and scaled up when the closest
    pair is nearer than the requested separation.
    """
    rng = stream(config.rng_seed, 1)
    for _ in range(MAX_SIGNATURE_ATTEMPTS):
        sig = rng.uniform(0.0, 1.0, size=(config.classes, config.bands))
        dmin = _min_pairwise_distance(sig)
        if dmin <= 1e-9:
            continue
        if dmin < config.signature_separation:
            sig = sig * (config.signature_separation / dmin)
            # guard against the scaled minimum landing a hair below the target
            if _min_pairwise_distance(sig) < config.signature_separation:
                sig = sig * (1.0 + 1e-12)
        if _min_pairwise_distance(sig) >= config.signature_separation:
            return sig
    raise ConfigError(
        f"could not place {config.classes} signatures {config.signature_separation} apart "
        f"in {config.bands} bands after {MAX_SIGNATURE_ATTEMPTS} attempts"
    )


def _grid_layout(config: SceneConfig) -> np.ndarray:
    b = config.layout.block_size
    if b > config.height or b > config.width:
        raise ConfigError(
            f"block size {b} exceeds image {config.height}x{config.width}"
        )
    nby = -(-config.height // b)
    nbx = -(-config.width // b)
    if nby * nbx < config.classes:
        raise ConfigError(f"{nby * nbx} blocks cannot hold {config.classes} classes")
    a = 2 if config.classes >= 4 else 1
    by = np.arange(config.height) // b
    bx = np.arange(config.width) // b
    lab = (a * by[:, None] + bx[None, :]) % config.classes + 1
    present = np.unique(lab)
    if present.size != config.classes:
        raise ConfigError("grid pattern does not place every class; enlarge the image")
    return lab


def _voronoi_layout(config: SceneConfig) -> np.ndarray:
    k = config.layout.seeds_per_class
    n_seeds = k * config.classes
    n_pix = config.height * config.width
    if n_seeds > n_pix:
        raise ConfigError(f"{n_seeds} Voronoi seeds do not fit in {n_pix} pixels")
    rng = stream(config.rng_seed, 2)
    flat = rng.choice(n_pix, size=n_seeds, replace=False)
    sy, sx = np.divmod(flat, config.width)
    seed_class = np.repeat(np.arange(1, config.classes + 1), k)
    yy, xx = np.mgrid[0 : config.height, 0 : config.width]
    d2 = (yy[..., None] - sy) ** 2 + (xx[..., None] - sx) ** 2
    # argmin picks the lowest seed index on ties, which keeps this deterministic
    return seed_class[np.argmin(d2, axis=-1)]


def generate_scene(config: SceneConfig) -> Tuple[HyperCube, LabelMap]:
    """Build a cube and fully labeled map; identical configs give identical output."""
    if isinstance(config.layout, GridBlocks):
        lab = _grid_layout(config)
    elif isinstance(config.layout, VoronoiBlobs):
        lab = _voronoi_layout(config)
    else:
        raise ConfigError(f"unknown layout {config.layout!r}")
    sig = class_signatures(config)
    cube = sig[lab - 1]
    if config.noise_sigma > 0:
        noise = stream(config.rng_seed, 3).standard_normal(cube.shape)
        cube = cube + config.noise_sigma * noise
    return HyperCube(cube.astype(np.float32)), LabelMap(lab)
