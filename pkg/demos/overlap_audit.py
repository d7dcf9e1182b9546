"""How much of the test set sits inside the training pixels' feature windows?

Stratified sampling scatters training pixels everywhere, so almost every test
pixel has a training neighbour once the feature window grows past 1x1.
Controlled sampling grows one compact training region per partition and
leaves most of the test set untouched.
"""

from hsileak import GridBlocks, SceneConfig, generate_scene
from hsileak.leakage import overlap_rate, pairwise_window_overlap
from hsileak.sampling import controlled_random_split, stratified_random_split

print("Two 3x3 windows one pixel apart share", pairwise_window_overlap(3, (0, 1)), "of their cells;")
print("two 5x5 windows share", pairwise_window_overlap(5, (0, 1)))

_, labels = generate_scene(SceneConfig(64, 64, 16, 4, GridBlocks(8)))
windows = (1, 3, 5, 7, 9)
print("\nrate  strategy    " + "  ".join(f"w={w}" for w in windows))
for rate in (0.05, 0.1, 0.25):
    for name, split_fn in (("stratified", stratified_random_split),
                           ("controlled", controlled_random_split)):
        split = split_fn(labels, rate, seed=1)
        row = "  ".join(f"{overlap_rate(split, w):.2f}" for w in windows)
        print(f"{rate:<5} {name:<11} {row}")
