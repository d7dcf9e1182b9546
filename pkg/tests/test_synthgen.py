import itertools

import numpy as np
import pytest

from hsileak import (
    ConfigError, GridBlocks, SceneConfig, VoronoiBlobs, class_counts, class_signatures,
    generate_scene,
)


def test_zero_noise_pixels_equal_signatures():
    cfg = SceneConfig(16, 16, 6, 3, VoronoiBlobs(2), 2.0, 0.0, rng_seed=1)
    cube, lab = generate_scene(cfg)
    sig = class_signatures(cfg).astype(np.float32)
    for c in range(1, 4):
        assert np.array_equal(cube.values[lab.labels == c], np.tile(sig[c - 1], ((lab.labels == c).sum(), 1)))


def test_determinism():
    cfg = SceneConfig(20, 24, 5, 3, VoronoiBlobs(3), 1.0, 0.3, rng_seed=9)
    a, la = generate_scene(cfg)
    b, lb = generate_scene(cfg)
    assert a == b and la == lb
    c, _ = generate_scene(SceneConfig(20, 24, 5, 3, VoronoiBlobs(3), 1.0, 0.3, rng_seed=10))
    assert not (a == c)


def test_grid_blocks_two_classes():
    cube, lab = generate_scene(SceneConfig(32, 32, 4, 2, GridBlocks(8), 1.0, 0.1))
    # enumerate the block assignment directly
    expected = np.zeros((32, 32), int)
    for by, bx in itertools.product(range(4), range(4)):
        expected[by * 8 : by * 8 + 8, bx * 8 : bx * 8 + 8] = (by + bx) % 2 + 1
    assert np.array_equal(lab.labels, expected)
    assert class_counts(lab) == {1: 512, 2: 512}


def test_grid_blocks_four_classes_never_touch():
    _, lab = generate_scene(SceneConfig(32, 32, 4, 4, GridBlocks(8), 1.0, 0.1))
    blocks = lab.labels[::8, ::8]
    for by, bx in itertools.product(range(4), range(4)):
        for dy, dx in ((0, 1), (1, 0), (1, 1), (1, -1)):
            ny, nx = by + dy, bx + dx
            if 0 <= ny < 4 and 0 <= nx < 4:
                assert blocks[by, bx] != blocks[ny, nx]


def test_degenerate_block_size():
    with pytest.raises(ConfigError):
        generate_scene(SceneConfig(8, 8, 4, 2, GridBlocks(9)))


@pytest.mark.parametrize("kw", [dict(classes=1), dict(noise_sigma=-1), dict(signature_separation=0)])
def test_config_invariants(kw):
    with pytest.raises(ConfigError):
        SceneConfig(**kw)


def _pairwise(sig):
    return [np.linalg.norm(a - b) for a, b in itertools.combinations(sig, 2)]


def test_signature_separation_two_classes():
    sig = class_signatures(SceneConfig(classes=2, bands=8, signature_separation=10))
    assert np.linalg.norm(sig[0] - sig[1]) >= 10


def test_signature_separation_four_classes():
    sig = class_signatures(SceneConfig(classes=4, bands=16, signature_separation=1))
    d = _pairwise(sig)
    assert len(d) == 6 and min(d) >= 1


def test_signatures_deterministic_in_seed():
    a = class_signatures(SceneConfig(rng_seed=4))
    assert np.array_equal(a, class_signatures(SceneConfig(rng_seed=4)))
    assert not np.array_equal(a, class_signatures(SceneConfig(rng_seed=5)))


def test_spatial_clustering():
    _, lab = generate_scene(SceneConfig(48, 48, 4, 4, VoronoiBlobs(4), 1.0, 0.1, rng_seed=2))
    L = lab.labels
    neighbor = np.mean(np.concatenate([(L[:, 1:] == L[:, :-1]).ravel(), (L[1:] == L[:-1]).ravel()]))
    rng = np.random.default_rng(0)
    a = rng.integers(0, L.size, 20000)
    b = rng.integers(0, L.size, 20000)
    random_pairs = np.mean(L.flat[a] == L.flat[b])
    assert neighbor > random_pairs + 0.3


def test_noise_std_matches_sigma():
    cfg = SceneConfig(160, 160, 6, 2, GridBlocks(16), 1.0, 0.25, rng_seed=3)
    cube, lab = generate_scene(cfg)
    sig = class_signatures(cfg)
    resid = cube.values[lab.labels == 1] - sig[0]
    assert resid.shape[0] >= 10_000
    assert np.all(np.abs(resid.std(axis=0) / 0.25 - 1) < 0.1)
