"""Training/testing split strategies.

``stratified_random_split`` draws a fixed fraction of every class uniformly
at random. ``controlled_random_split`` instead grows one compact training
region inside every connected partition of a class, so training pixels are
clustered locally but spread over the whole image.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

import numpy as np

from .datamodel import LabelMap, PixelState, SplitMask, class_counts
from .errors import ConfigError, DataError
from .rng import stream

NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class Strategy(str, Enum):
    STRATIFIED = "stratified"
    CONTROLLED = "controlled"


@dataclass(frozen=True)
class SamplingPlan:
    rate: float
    seed: int = 0
    strategy: Strategy = Strategy.STRATIFIED

    def __post_init__(self):
        _check_rate(self.rate)
        object.__setattr__(self, "strategy", Strategy(self.strategy))

    def apply(self, labels: LabelMap) -> SplitMask:
        if self.strategy is Strategy.STRATIFIED:
            return stratified_random_split(labels, self.rate, self.seed)
        return controlled_random_split(labels, self.rate, self.seed)


@dataclass(frozen=True, eq=False)
class Partition:
    """Maximal 8-connected set of same-class pixels."""

    class_id: int
    id: int
    pixels: np.ndarray  # (n, 2) of (y, x), scanline order

    @property
    def size(self) -> int:
        return len(self.pixels)


def _check_rate(rate: float) -> None:
    if not (0.0 < rate < 1.0):
        raise ConfigError(f"sampling rate must lie in (0, 1), got {rate}")


def round_half_up(v: float) -> int:
    # the epsilon absorbs products like 4.5 landing at 4.4999999
    return int(math.floor(v + 0.5 + 1e-9))


def class_quota(n_c: int, rate: float) -> int:
    """Training pixels for a class of ``n_c`` pixels: at least one, never all."""
    return min(max(round_half_up(n_c * rate), 1), n_c - 1)


def _check_classes(labels: LabelMap) -> Dict[int, int]:
    counts = class_counts(labels)
    small = [c for c, n in counts.items() if n < 2]
    if small:
        raise DataError(f"classes {small} have fewer than 2 pixels; cannot hold out a test pixel")
    return counts


def stratified_random_split(labels: LabelMap, rate: float, seed: int) -> SplitMask:
    """Per class, mark ``round(n_c * rate)`` pixels (at least 1) Train uniformly at random."""
    _check_rate(rate)
    counts = _check_classes(labels)
    lab = labels.labels
    state = np.where(lab > 0, PixelState.TEST, PixelState.EXCLUDED).astype(np.uint8)
    for c, n_c in counts.items():
        flat = np.flatnonzero(lab == c)
        rng = stream(seed, c)
        chosen = rng.choice(n_c, size=class_quota(n_c, rate), replace=False)
        state.flat[flat[chosen]] = PixelState.TRAIN
    return SplitMask(state, seed=seed, labels=labels)


def _label_components(lab: np.ndarray, class_id: int):
    """Component id map (-1 off-class) and per-component pixel lists, scanline ordered."""
    h, w = lab.shape
    member = lab == class_id
    comp = np.full(lab.shape, -1, dtype=np.int64)
    pixels: List[List] = []
    for y0, x0 in np.argwhere(member):
        if comp[y0, x0] >= 0:
            continue
        cid = len(pixels)
        comp[y0, x0] = cid
        queue = deque([(y0, x0)])
        found = []
        while queue:
            y, x = queue.popleft()
            found.append((y, x))
            for dy, dx in NEIGHBORS_8:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and member[ny, nx] and comp[ny, nx] < 0:
                    comp[ny, nx] = cid
                    queue.append((ny, nx))
        found.sort()
        pixels.append(found)
    return comp, pixels


def connected_partitions(labels: LabelMap, class_id: int) -> List[Partition]:
    """Maximal 8-connected components of one class, ordered by their first scanline pixel."""
    if class_id < 1 or class_id not in class_counts(labels):
        raise DataError(f"class {class_id} does not occur in the label map")
    _, pixels = _label_components(labels.labels, class_id)
    return [
        Partition(class_id, i, np.array(p, dtype=np.int64).reshape(-1, 2))
        for i, p in enumerate(pixels)
    ]


def _partition_quotas(sizes: np.ndarray, rate: float, class_target: int, rng) -> np.ndarray:
    """Training pixels per partition: round-half-up of ``n_p * rate``.

    When more partitions ask for a pixel than the class quota
    ``round(n_c * rate)`` allows, partitions are drawn at random and keep
    their quota until the class quota is reached. A class whose partitions
    all round to zero trains on one pixel of its largest partition, and a
    class is never trained on every one of its pixels.
    """
    quotas = np.array([round_half_up(n * rate) for n in sizes], dtype=np.int64)
    quotas = np.minimum(quotas, sizes)
    active = np.flatnonzero(quotas >= 1)
    if active.size > class_target:
        keep = np.zeros_like(quotas)
        left = class_target
        for i in rng.permutation(active):
            if left == 0:
                break
            keep[i] = min(quotas[i], left)
            left -= keep[i]
        quotas = keep
    largest = int(np.argmax(sizes))
    if quotas.sum() == 0:
        quotas[largest] = 1
    if quotas.sum() == sizes.sum():
        quotas[int(np.argmax(quotas))] -= 1
    return quotas


def grow_region(comp: np.ndarray, cid: int, seed_px, size: int, rng) -> List[tuple]:
    """Grow an 8-connected region of ``size`` pixels inside component ``cid``.

    Expansion is breadth first: each ring of unvisited neighbours is shuffled
    and consumed until the region reaches the requested size.
    """
    h, w = comp.shape
    region = [tuple(seed_px)]
    visited = {tuple(seed_px)}
    ring = [tuple(seed_px)]
    while len(region) < size:
        nxt = []
        for y, x in ring:
            for dy, dx in NEIGHBORS_8:
                p = (y + dy, x + dx)
                if 0 <= p[0] < h and 0 <= p[1] < w and p not in visited and comp[p] == cid:
                    visited.add(p)
                    nxt.append(p)
        if not nxt:
            raise DataError("region growth exhausted its partition before reaching quota")
        order = rng.permutation(len(nxt))
        need = size - len(region)
        region.extend(nxt[i] for i in order[:need])
        ring = nxt
    return region


def controlled_random_split(labels: LabelMap, rate: float, seed: int) -> SplitMask:
    """Grow one training region per connected partition of every class.

    Each partition of ``n_p`` pixels contributes a region of
    ``round(n_p * rate)`` pixels grown from a uniformly random seed pixel (see
    ``_partition_quotas`` for the surplus and minimum rules). Labeled pixels
    outside the regions, including partitions left unsampled, are Test.
    """
    _check_rate(rate)
    counts = _check_classes(labels)
    lab = labels.labels
    state = np.where(lab > 0, PixelState.TEST, PixelState.EXCLUDED).astype(np.uint8)
    for c, n_c in counts.items():
        rng = stream(seed, c)
        comp, parts = _label_components(lab, c)
        sizes = np.array([len(p) for p in parts], dtype=np.int64)
        quotas = _partition_quotas(sizes, rate, class_quota(n_c, rate), rng)
        for cid, (pix, n_t) in enumerate(zip(parts, quotas)):
            if n_t == 0:
                continue
            q = pix[int(rng.integers(len(pix)))]
            for y, x in grow_region(comp, cid, q, int(n_t), rng):
                state[y, x] = PixelState.TRAIN
    return SplitMask(state, seed=seed, labels=labels)


def partition_quotas(labels: LabelMap, class_id: int, rate: float, seed: int) -> np.ndarray:
    """Training count each partition of ``class_id`` receives under controlled sampling."""
    counts = _check_classes(labels)
    if class_id not in counts:
        raise DataError(f"class {class_id} does not occur in the label map")
    parts = connected_partitions(labels, class_id)
    sizes = np.array([p.size for p in parts], dtype=np.int64)
    return _partition_quotas(sizes, rate, class_quota(counts[class_id], rate), stream(seed, class_id))


@dataclass(frozen=True)
class SplitSummary:
    train: Dict[int, int]
    test: Dict[int, int]
    rate: float


def split_summary(split: SplitMask, labels: LabelMap) -> SplitSummary:
    if split.shape != labels.shape:
        raise DataError(f"split {split.shape} does not match labels {labels.shape}")
    lab = labels.labels
    train, test = {}, {}
    for c in range(1, labels.n_classes + 1):
        here = lab == c
        train[c] = int(np.count_nonzero(split.train & here))
        test[c] = int(np.count_nonzero(split.test & here))
    n_train = sum(train.values())
    total = n_train + sum(test.values())
    return SplitSummary(train, test, n_train / total if total else 0.0)
