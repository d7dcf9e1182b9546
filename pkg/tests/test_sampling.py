import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flood_components, random_label_map
from hsileak import (
    ConfigError, DataError, GridBlocks, LabelMap, SamplingPlan, SceneConfig, SplitMask, Strategy,
    class_counts, connected_partitions, controlled_random_split, generate_scene, split_summary,
    stratified_random_split,
)
from hsileak.sampling import class_quota, partition_quotas, round_half_up


def test_round_half_up():
    assert [round_half_up(v) for v in (0.49, 0.5, 1.5, 2.5, 6.4)] == [0, 1, 2, 3, 6]
    assert round_half_up(45 * 0.1) == 5


# -- stratified ---------------------------------------------------------------

def test_stratified_quota_200_at_5_percent():
    lab = np.zeros((20, 20), int)
    lab[:10] = 1
    lab[10:] = 2
    split = stratified_random_split(LabelMap(lab), 0.05, seed=1)
    assert split.train[lab == 1].sum() == 10
    assert split.train[lab == 2].sum() == 10


def test_stratified_deterministic():
    lab = LabelMap(np.ones((10, 10), int))
    assert stratified_random_split(lab, 0.3, 4) == stratified_random_split(lab, 0.3, 4)


def test_stratified_seeds_differ():
    lab = LabelMap(np.ones((10, 10), int))
    a = stratified_random_split(lab, 0.5, 1)
    b = stratified_random_split(lab, 0.5, 2)
    assert a.train.sum() == b.train.sum() == 50
    assert not np.array_equal(a.train, b.train)


def test_stratified_tiny_class_rejected():
    with pytest.raises(DataError):
        stratified_random_split(LabelMap([[1, 1, 2]]), 0.5, 0)


@pytest.mark.parametrize("rate", [0, 1, -0.1, 1.5])
def test_rate_bounds(rate):
    with pytest.raises(ConfigError):
        stratified_random_split(LabelMap([[1, 1]]), rate, 0)
    with pytest.raises(ConfigError):
        SamplingPlan(rate)


def test_stratified_keeps_a_test_pixel():
    split = stratified_random_split(LabelMap([[1, 1]]), 0.9, 0)
    assert split.train.sum() == 1 and split.test.sum() == 1


# -- partitions ----------------------------------------------------------------

def test_single_block_one_partition():
    lab = np.zeros((7, 7), int)
    lab[1:6, 1:6] = 1
    parts = connected_partitions(LabelMap(lab), 1)
    assert len(parts) == 1 and parts[0].size == 25


def test_blocks_separated_by_background_row():
    lab = np.ones((5, 4), int)
    lab[2] = 0
    parts = connected_partitions(LabelMap(lab), 1)
    assert [p.size for p in parts] == [8, 8]
    assert tuple(parts[0].pixels[0]) == (0, 0) and tuple(parts[1].pixels[0]) == (3, 0)


def test_diagonal_chain_is_one_partition():
    lab = np.eye(6, dtype=int)
    assert len(flood_components(lab == 1)) == 1
    assert len(connected_partitions(LabelMap(lab), 1)) == 1


def test_unknown_class():
    with pytest.raises(DataError):
        connected_partitions(LabelMap([[1, 1]]), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_partitions_match_flood_fill(seed):
    lab = random_label_map(np.random.default_rng(seed))
    for c in class_counts(lab):
        parts = connected_partitions(lab, c)
        oracle = flood_components(lab.labels == c)
        assert sorted(p.size for p in parts) == sorted(len(o) for o in oracle)
        covered = np.concatenate([p.pixels for p in parts])
        assert len({tuple(p) for p in covered}) == (lab.labels == c).sum()
        firsts = [tuple(p.pixels[0]) for p in parts]
        assert firsts == sorted(firsts)


# -- controlled ----------------------------------------------------------------

def test_controlled_solid_block():
    lab = LabelMap(np.ones((10, 10), int))
    split = controlled_random_split(lab, 0.25, seed=3)
    assert split.train.sum() == 25
    assert len(flood_components(split.train)) == 1


def test_controlled_small_partition_gets_no_train():
    lab = np.zeros((10, 10), int)
    lab[0, 0:3] = 1  # 3-pixel partition: 3 * 0.1 rounds to 0
    lab[3:10, 3:10] = 1  # 49 pixels: 4.9 rounds to 5
    lab[0, 9] = 2
    lab[9, 0] = 2
    split = controlled_random_split(LabelMap(lab), 0.1, seed=0)
    assert split.train[0, 0:3].sum() == 0
    assert split.test[0, 0:3].all()
    assert split.train[3:10, 3:10].sum() == 5


def test_controlled_grid_blocks_per_partition_counts():
    _, lab = generate_scene(SceneConfig(64, 64, 4, 4, GridBlocks(8), 1.0, 0.0))
    split = controlled_random_split(lab, 0.1, seed=11)
    expected = round_half_up(64 * 0.1)
    assert expected == 6
    for by in range(8):
        for bx in range(8):
            block = split.train[by * 8 : by * 8 + 8, bx * 8 : bx * 8 + 8]
            assert block.sum() == expected
            assert len(flood_components(block)) == 1


def test_controlled_deterministic():
    lab = random_label_map(np.random.default_rng(1), 12, 12, 3)
    assert controlled_random_split(lab, 0.3, 8) == controlled_random_split(lab, 0.3, 8)


def test_controlled_surplus_partitions_sampled():
    # 10 isolated pairs of class 1: each rounds to 1 at rate 0.3 but the class quota is 6
    lab = np.zeros((4, 30), int)
    lab[0, 0:30:3] = 1
    lab[1, 0:30:3] = 1
    lab[3, :2] = 2
    labels = LabelMap(lab)
    q = partition_quotas(labels, 1, 0.3, seed=5)
    assert q.sum() == class_quota(20, 0.3) == 6
    assert sorted(q.tolist()) == [0] * 4 + [1] * 6
    split = controlled_random_split(labels, 0.3, seed=5)
    assert split.train[lab == 1].sum() == 6
    chosen = [i for i in range(10) if split.train[0:2, 3 * i].any()]
    assert chosen == [i for i in range(10) if q[i] == 1]


def _controlled_total(labels, c, rate):
    # independent statement of the per-partition rounding rule
    sizes = [len(comp) for comp in flood_components(labels.labels == c)]
    raw = [int(np.floor(n * rate + 0.5 + 1e-9)) for n in sizes]
    target = class_quota(sum(sizes), rate)
    total = target if sum(q >= 1 for q in raw) > target else max(sum(raw), 1)
    return min(total, sum(sizes) - 1)


def _check_split(labels, split, rate, strategy):
    lab = labels.labels
    assert np.all(split.train <= (lab > 0))
    assert np.array_equal(split.test, (lab > 0) & ~split.train)
    for c, n_c in class_counts(labels).items():
        n_train = split.train[lab == c].sum()
        if strategy == "stratified":
            assert n_train == class_quota(n_c, rate)
        else:
            assert n_train == _controlled_total(labels, c, rate)
            q = partition_quotas(labels, c, rate, split.seed)
            for part, n_t in zip(connected_partitions(labels, c), q):
                region = np.zeros(lab.shape, bool)
                region[part.pixels[:, 0], part.pixels[:, 1]] = True
                train_here = split.train & region
                assert train_here.sum() == n_t
                if n_t:
                    assert len(flood_components(train_here)) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.05, 0.1, 0.25, 0.5, 0.7]),
       st.sampled_from(["stratified", "controlled"]))
def test_split_invariants(seed, rate, strategy):
    labels = random_label_map(np.random.default_rng(seed))
    split = SamplingPlan(rate, seed, strategy).apply(labels)
    _check_split(labels, split, rate, strategy)


def test_partition_quotas_without_surplus_match_rounding():
    # class total follows the partitions (16 * 6 = 96), not round(1024 * 0.1) = 102
    _, lab = generate_scene(SceneConfig(64, 64, 4, 4, GridBlocks(8), 1.0, 0.0))
    for c in range(1, 5):
        q = partition_quotas(lab, c, 0.1, 0)
        assert q.tolist() == [6] * 16


def test_controlled_tiny_partitions_still_train_one_pixel():
    lab = np.zeros((6, 6), int)
    lab[0, 0] = lab[0, 2] = lab[0, 4] = 1  # three singletons, each rounds to 0 at 0.1
    lab[5, :] = 2
    split = controlled_random_split(LabelMap(lab), 0.1, seed=0)
    assert split.train[lab == 1].sum() == 1


# -- summary -------------------------------------------------------------------

def test_summary_all_train():
    lab = LabelMap([[1, 2], [2, 0]])
    s = split_summary(SplitMask([[1, 1], [1, 0]], labels=lab), lab)
    assert s.test == {1: 0, 2: 0} and s.train == {1: 1, 2: 2} and s.rate == 1.0


def test_summary_empty_labels():
    lab = LabelMap(np.zeros((2, 2), int))
    s = split_summary(SplitMask(np.zeros((2, 2)), labels=lab), lab)
    assert s.train == {} and s.test == {} and s.rate == 0.0


def test_summary_matches_recount():
    labels = random_label_map(np.random.default_rng(3), 10, 10, 3)
    split = stratified_random_split(labels, 0.3, 1)
    s = split_summary(split, labels)
    for c in (1, 2, 3):
        n_train = sum(1 for y in range(10) for x in range(10)
                      if labels.labels[y, x] == c and split.state[y, x] == 1)
        n_test = sum(1 for y in range(10) for x in range(10)
                     if labels.labels[y, x] == c and split.state[y, x] == 2)
        assert (s.train[c], s.test[c]) == (n_train, n_test)


def test_summary_dimension_mismatch():
    with pytest.raises(DataError):
        split_summary(SplitMask(np.zeros((2, 2))), LabelMap(np.zeros((3, 3), int)))


def test_plan_strategy_enum():
    assert SamplingPlan(0.1, strategy="controlled").strategy is Strategy.CONTROLLED
