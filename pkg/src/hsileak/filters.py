"""Per-band spatial smoothing: box mean filter and truncated Gaussian.

Both filters replicate edge pixels, so the output has the input's size and
every pixel keeps a full window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datamodel import HyperCube
from .errors import ConfigError


@dataclass(frozen=True)
class WindowSpec:
    m_width: int
    n_height: int

    def __post_init__(self):
        for name, v in (("width", self.m_width), ("height", self.n_height)):
            if v < 1 or v % 2 == 0:
                raise ConfigError(f"window {name} must be odd and >= 1, got {v}")

    @classmethod
    def square(cls, size: int) -> "WindowSpec":
        return cls(size, size)


@dataclass(frozen=True)
class GaussianSpec:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")

    @property
    def truncation_radius(self) -> int:
        return int(math.ceil(3.0 * self.sigma))

    def kernel(self) -> np.ndarray:
        r = self.truncation_radius
        t = np.arange(-r, r + 1, dtype=np.float64)
        k = np.exp(-0.5 * (t / self.sigma) ** 2)
        return k / k.sum()


def box_mean_2d(values: np.ndarray, wy: int, wx: int) -> np.ndarray:
    """Window mean over the two leading axes of ``values`` with edge replication."""
    ry, rx = wy // 2, wx // 2
    pad = [(ry, ry), (rx, rx)] + [(0, 0)] * (values.ndim - 2)
    p = np.pad(np.asarray(values, dtype=np.float64), pad, mode="edge")
    # summed-area table with a leading zero row/column
    s = np.cumsum(np.cumsum(p, axis=0), axis=1)
    s = np.pad(s, [(1, 0), (1, 0)] + [(0, 0)] * (values.ndim - 2))
    h, w = values.shape[:2]
    tot = s[wy : wy + h, wx : wx + w] - s[:h, wx : wx + w] - s[wy : wy + h, :w] + s[:h, :w]
    return tot / (wy * wx)


def mean_filter(cube: HyperCube, window: WindowSpec) -> HyperCube:
    if isinstance(window, int):
        window = WindowSpec.square(window)
    if window.m_width == 1 and window.n_height == 1:
        return HyperCube(cube.values.astype(np.float64))
    return HyperCube(box_mean_2d(cube.values, window.n_height, window.m_width))


def _convolve_axis(p: np.ndarray, kernel: np.ndarray, axis: int, n: int) -> np.ndarray:
    out = np.zeros(p.shape[:axis] + (n,) + p.shape[axis + 1 :])
    for i, wgt in enumerate(kernel):
        out += wgt * np.take(p, np.arange(i, i + n), axis=axis)
    return out


def gaussian_filter(cube: HyperCube, spec: GaussianSpec) -> HyperCube:
    """Separable Gaussian smoothing of every band, kernel cut at ceil(3 sigma)."""
    if isinstance(spec, (int, float)):
        spec = GaussianSpec(float(spec))
    k = spec.kernel()
    r = spec.truncation_radius
    v = np.pad(cube.values.astype(np.float64), [(r, r), (r, r), (0, 0)], mode="edge")
    v = _convolve_axis(v, k, 0, cube.height)
    v = _convolve_axis(v, k, 1, cube.width)
    return HyperCube(v)


def effective_window(spec) -> int:
    """Side of the square neighbourhood a filter reads from."""
    if isinstance(spec, WindowSpec):
        return max(spec.m_width, spec.n_height)
    if isinstance(spec, GaussianSpec):
        return 2 * spec.truncation_radius + 1
    raise ConfigError(f"unknown filter spec {spec!r}")
