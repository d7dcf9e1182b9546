import numpy as np
import pytest

from hsileak import GridBlocks, LabelMap, SceneConfig, VoronoiBlobs, generate_scene


@pytest.fixture(scope="session")
def blob_scene():
    cfg = SceneConfig(32, 32, 8, 3, VoronoiBlobs(3), 1.0, 0.2, rng_seed=5)
    return generate_scene(cfg)


@pytest.fixture(scope="session")
def grid_scene():
    cfg = SceneConfig(32, 32, 8, 4, GridBlocks(8), 1.0, 0.1, rng_seed=3)
    return generate_scene(cfg)


def random_label_map(rng, h=None, w=None, classes=None, p_unlabeled=0.2):
    """Random label map where every class has at least two pixels."""
    h = h or int(rng.integers(4, 16))
    w = w or int(rng.integers(4, 16))
    classes = classes or int(rng.integers(1, 5))
    while True:
        lab = rng.integers(1, classes + 1, size=(h, w))
        lab[rng.random((h, w)) < p_unlabeled] = 0
        ids, counts = np.unique(lab[lab > 0], return_counts=True)
        if ids.size == classes and counts.min() >= 2:
            return LabelMap(lab)


def flood_components(mask):
    """Independent 8-connected component count by recursive-free DFS."""
    mask = np.asarray(mask, bool)
    seen = np.zeros_like(mask)
    comps = []
    for start in zip(*np.nonzero(mask)):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            y, x = stack.pop()
            comp.append((y, x))
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < mask.shape[0] and 0 <= nx < mask.shape[1] \
                            and mask[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        stack.append((ny, nx))
        comps.append(comp)
    return comps


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
