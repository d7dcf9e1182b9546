"""Spectral-spatial features side by side.

Extracts the raw spectrum, a Gaussian-smoothed spectrum, 3-D wavelet
features and an extended morphological profile from one scene, then scores
each with a random forest under both sampling strategies.
"""

from hsileak import SceneConfig, VoronoiBlobs, generate_scene
from hsileak.harness import ClassifierSpec, ExperimentConfig, FeatureSpec, run_experiment

scene = SceneConfig(48, 48, 16, 4, VoronoiBlobs(4), 1.0, 0.6, rng_seed=5)
cube, labels = generate_scene(scene)
print("feature       dim   window  stratified  controlled")
for text in ("raw", "gaussian:1", "dwt3d", "emp:3:2"):
    spec = FeatureSpec.parse(text)
    dim = spec.feature_map(cube).shape[2]
    oa = []
    for strategy in ("stratified", "controlled"):
        cfg = ExperimentConfig(scene=scene, strategy=strategy, rates=(0.1,), feature=spec,
                               classifier=ClassifierSpec.parse("rf:30"), repetitions=2)
        oa.append(run_experiment(cfg, cube, labels).mean_oa())
    print(f"{spec.name:<12} {dim:>4}  {spec.effective_window:>6}  {oa[0]:10.3f}  {oa[1]:10.3f}")
