import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsileak import ConfigError, HyperCube
from hsileak.filters import (
    GaussianSpec, WindowSpec, box_mean_2d, effective_window, gaussian_filter, mean_filter,
)


def _cube(rng, h=9, w=11, b=3):
    return HyperCube(rng.normal(size=(h, w, b)))


def _brute_mean(values, wy, wx):
    h, w = values.shape[:2]
    out = np.zeros(values.shape)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-(wy // 2), wy // 2 + 1):
                for dx in range(-(wx // 2), wx // 2 + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    acc = acc + values[yy, xx]
            out[y, x] = acc / (wy * wx)
    return out


@pytest.mark.parametrize("m,n", [(2, 3), (3, 0), (-1, 1)])
def test_window_must_be_odd_positive(m, n):
    with pytest.raises(ConfigError):
        WindowSpec(m, n)


def test_sigma_must_be_positive():
    with pytest.raises(ConfigError):
        GaussianSpec(0.0)


def test_identity_window():
    cube = _cube(np.random.default_rng(0))
    assert np.array_equal(mean_filter(cube, WindowSpec(1, 1)).values, cube.values)


@pytest.mark.parametrize("w", [1, 3, 5, 9])
def test_constant_cube_stays_constant(w):
    cube = HyperCube(np.full((6, 7, 2), 5.0))
    assert np.allclose(mean_filter(cube, WindowSpec.square(w)).values, 5.0, atol=1e-12)


def test_hand_computed_center():
    cube = HyperCube(np.arange(1, 10, dtype=float).reshape(3, 3, 1))
    assert mean_filter(cube, WindowSpec.square(3)).values[1, 1, 0] == pytest.approx(5.0)


@pytest.mark.parametrize("wy,wx", [(3, 3), (5, 3), (1, 7), (9, 9)])
def test_mean_matches_brute_force(wy, wx):
    v = np.random.default_rng(wy * 10 + wx).normal(size=(6, 8, 2))
    assert np.allclose(box_mean_2d(v, wy, wx), _brute_mean(v, wy, wx), atol=1e-12)
    out = mean_filter(HyperCube(v), WindowSpec(wx, wy))
    assert out.shape == v.shape


@settings(max_examples=30, deadline=None)
@given(st.floats(-50, 50).filter(lambda a: abs(a) > 1e-3), st.sampled_from([3, 5, 7]),
       st.integers(0, 1000))
def test_mean_is_linear(alpha, w, seed):
    cube = _cube(np.random.default_rng(seed))
    lhs = mean_filter(HyperCube(alpha * cube.values), WindowSpec.square(w)).values
    rhs = alpha * mean_filter(cube, WindowSpec.square(w)).values
    assert np.allclose(lhs, rhs, rtol=1e-6, atol=1e-9)


def test_gaussian_kernel_normalised():
    for s in (0.5, 1.0, 2.0, 8.0):
        spec = GaussianSpec(s)
        k = spec.kernel()
        assert k.size == 2 * spec.truncation_radius + 1
        assert k.sum() == pytest.approx(1.0, abs=1e-12)
    assert GaussianSpec(0.5).truncation_radius == 2


def test_gaussian_constant_cube():
    cube = HyperCube(np.full((8, 8, 3), -2.5))
    assert np.allclose(gaussian_filter(cube, GaussianSpec(1.3)).values, -2.5, atol=1e-12)


def test_gaussian_impulse_center_weight():
    spec = GaussianSpec(0.5)
    plane = np.zeros((11, 11, 1))
    plane[5, 5, 0] = 1.0
    out = gaussian_filter(HyperCube(plane), spec).values[:, :, 0]
    k = spec.kernel()
    c = spec.truncation_radius
    assert out[5, 5] == pytest.approx(k[c] ** 2, abs=1e-15)
    assert np.allclose(out[5 - c : 5 + c + 1, 5 - c : 5 + c + 1], np.outer(k, k), atol=1e-15)


def test_gaussian_preserves_mean_on_interior_dominated_image():
    rng = np.random.default_rng(4)
    v = np.zeros((80, 80, 1))
    v[20:60, 20:60, 0] = rng.random((40, 40)) + 1.0
    out = gaussian_filter(HyperCube(v), GaussianSpec(2.0)).values
    assert out.mean() == pytest.approx(v.mean(), rel=1e-6)


def test_smaller_sigma_stays_closer_to_original():
    rng = np.random.default_rng(9)
    wins = 0
    for _ in range(20):
        v = rng.normal(size=(24, 24, 1))
        a = gaussian_filter(HyperCube(v), GaussianSpec(0.5)).values.ravel()
        b = gaussian_filter(HyperCube(v), GaussianSpec(2.0)).values.ravel()
        wins += np.corrcoef(a, v.ravel())[0, 1] > np.corrcoef(b, v.ravel())[0, 1]
    assert wins == 20


def test_filters_do_not_mix_bands():
    v = np.zeros((7, 7, 3))
    v[:, :, 1] = np.random.default_rng(2).normal(size=(7, 7))
    for out in (mean_filter(HyperCube(v), WindowSpec.square(3)),
                gaussian_filter(HyperCube(v), GaussianSpec(1.0))):
        assert np.all(out.values[:, :, [0, 2]] == 0)


def test_effective_window():
    assert effective_window(WindowSpec(3, 5)) == 5
    assert effective_window(GaussianSpec(1.0)) == 7
    with pytest.raises(ConfigError):
        effective_window("mean")
