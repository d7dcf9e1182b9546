import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hsileak import (
    ConfusionMatrix, DataError, FeatureSet, HyperCube, LabelMap, SplitMask,
    class_counts, spectrum_at,
)


def test_class_counts_small_map():
    assert class_counts(LabelMap([[1, 1], [2, 0]])) == {1: 2, 2: 1}


def test_class_counts_all_zero():
    assert class_counts(LabelMap(np.zeros((3, 3), int))) == {}


def test_class_counts_checkerboard():
    yy, xx = np.mgrid[0:10, 0:10]
    lab = (yy + xx) % 2 + 1
    expected = {c: sum(1 for y in range(10) for x in range(10) if (y + x) % 2 + 1 == c)
                for c in (1, 2)}
    assert expected == {1: 50, 2: 50}
    assert class_counts(LabelMap(lab)) == expected


@settings(max_examples=50)
@given(arrays(np.int64, st.tuples(st.integers(1, 12), st.integers(1, 12)),
              elements=st.integers(0, 4)))
def test_class_counts_sums_to_labeled(raw):
    # relabel to a contiguous range so the map is valid
    ids = np.unique(raw[raw > 0])
    lab = np.zeros_like(raw)
    for new, old in enumerate(ids, start=1):
        lab[raw == old] = new
    counts = class_counts(LabelMap(lab))
    assert sum(counts.values()) == np.count_nonzero(lab)


def test_spectrum_at():
    cube = HyperCube(np.full((3, 4, 5), 5.0))
    assert spectrum_at(cube, 2, 3).tolist() == [5.0] * 5
    ramp = HyperCube(np.broadcast_to(np.arange(6.0), (2, 2, 6)))
    assert spectrum_at(ramp, 1, 0).tolist() == [0, 1, 2, 3, 4, 5]
    with pytest.raises(IndexError):
        spectrum_at(cube, -1, 0)
    with pytest.raises(IndexError):
        spectrum_at(cube, 0, 4)


def test_spectrum_at_returns_copy():
    cube = HyperCube(np.zeros((2, 2, 3)))
    s = spectrum_at(cube, 0, 0)
    s[0] = 9
    assert cube.values[0, 0, 0] == 0


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_cube_rejects_non_finite(bad):
    v = np.zeros((2, 2, 2))
    v[1, 1, 1] = bad
    with pytest.raises(DataError):
        HyperCube(v)


def test_cube_is_immutable():
    cube = HyperCube(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        cube.values[0, 0, 0] = 1


def test_cube_shape_checks():
    with pytest.raises(DataError):
        HyperCube(np.zeros((2, 2)))
    with pytest.raises(DataError):
        HyperCube(np.zeros((0, 2, 2)))


def test_label_map_contiguity():
    with pytest.raises(DataError, match="missing \\[2\\]"):
        LabelMap([[1, 3], [0, 1]])
    with pytest.raises(DataError):
        LabelMap([[-1, 1]])
    assert LabelMap([[2, 1]]).n_classes == 2


def test_split_mask_invariants():
    labels = LabelMap([[1, 0], [2, 2]])
    SplitMask([[1, 0], [2, 1]], seed=3, labels=labels)
    with pytest.raises(DataError):
        SplitMask([[1, 1], [2, 2]], labels=labels)  # train on unlabeled pixel
    with pytest.raises(DataError):
        SplitMask([[0, 0], [2, 2]], labels=labels)  # labeled pixel excluded
    with pytest.raises(DataError):
        SplitMask([[3, 0], [2, 2]])


def test_feature_set_invariants():
    fs = FeatureSet(np.ones((2, 3)), [[0, 0], [1, 2]], shape_hw=(2, 3))
    assert (fs.count, fs.dim) == (2, 3)
    with pytest.raises(DataError):
        FeatureSet(np.ones((2, 3)), [[0, 0], [0, 0]])
    with pytest.raises(DataError):
        FeatureSet(np.ones((1, 3)), [[2, 0]], shape_hw=(2, 2))
    with pytest.raises(DataError):
        FeatureSet(np.array([[np.nan]]), [[0, 0]])


def test_confusion_matrix_invariants():
    m = ConfusionMatrix([[1, 2], [0, 3]])
    assert m.total == 6 and m.classes == 2
    with pytest.raises(DataError):
        ConfusionMatrix([[1, -1], [0, 0]])
    with pytest.raises(DataError):
        ConfusionMatrix([[1, 2, 3]])
