"""A classifier that never looks at a spectrum can win, if the split lets it.

On a scene made of compact class regions, predicting from pixel position
alone (1-nearest neighbour on (y, x)) beats a linear SVM on the spectra when
the training pixels are scattered at random. With controlled sampling the
position shortcut stops working and the spectral classifier comes out ahead.
"""

from hsileak import SceneConfig, VoronoiBlobs, generate_scene
from hsileak.harness import ClassifierSpec, ExperimentConfig, FeatureSpec, run_experiment

scene = SceneConfig(96, 96, 16, 4, VoronoiBlobs(3), 1.0, 0.7, rng_seed=7)
cube, labels = generate_scene(scene)
for strategy in ("stratified", "controlled"):
    for feature, clf in (("coords", "knn:1"), ("raw", "svm:1")):
        cfg = ExperimentConfig(scene=scene, strategy=strategy, rates=(0.05,),
                               feature=FeatureSpec.parse(feature),
                               classifier=ClassifierSpec.parse(clf), repetitions=5)
        res = run_experiment(cfg, cube, labels)
        agg = res.aggregates[0.05]
        print(f"{strategy:<11} {feature:>6} + {clf:<6} OA {agg.oa:.3f} +/- {agg.oa_std:.3f}")
