"""End-to-end experiments: sample, extract, train, score, audit.

Features are extracted once over the whole (optionally filtered) cube and
then indexed by the split, which is exactly how most published pipelines
leak test information into training. The ``overlap_rate`` column records how
much of the test set falls inside the training pixels' feature windows.

Configuration files are flat ``key = value`` text (``#`` starts a comment):

==================  =========================================================
key                 value
==================  =========================================================
cube, labels        paths to an ``.hsic`` cube and a label grid (relative to
                    the config file); alternatively the ``scene.*`` keys
scene.height        synthetic scene rows (default 64)
scene.width         synthetic scene columns (default 64)
scene.bands         bands (default 16)
scene.classes       classes (default 4)
scene.layout        ``voronoi:<seeds per class>`` or ``grid:<block size>``
scene.separation    minimum distance between class mean spectra (default 1)
scene.noise         per-band Gaussian noise std (default 0.1)
scene.seed          scene seed (default 0)
strategy            ``stratified`` or ``controlled``
rates               comma-separated sampling rates in (0, 1)
feature             ``raw``, ``coords``, ``mean:<w>``, ``gaussian:<sigma>``,
                    ``dwt3d`` or ``emp:<m>:<n>``
classifier          ``knn:<k>``, ``svm:<cost>[,<cost>...]`` (several costs are
                    chosen by 5-fold CV) or ``rf:<trees>[:<max depth>]``
epochs              SVM epochs (default 20)
repetitions         repetitions per rate (default 10)
master_seed         integer (default 0)
output_dir          where CSVs go (default ``results``)
save_splits         ``true`` writes ``split_<rate>_<rep>.txt``
save_maps           ``true`` writes ``map_<rate>_<rep>.ppm``
==================  =========================================================

Outputs: ``results.csv`` with columns ``strategy, rate, feature, classifier,
repetition, oa, aa, kappa, overlap_rate, seed`` (a failed repetition has
``nan`` scores and a line in ``failures.csv``) and ``aggregate.csv`` with
per-rate means and sample standard deviations.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import features as feat
from .classify import CvGrid, cross_validate, fit
from .datamodel import HyperCube, LabelMap
from .errors import ConfigError, FormatError, HsiError
from .filters import GaussianSpec, WindowSpec, gaussian_filter, mean_filter
from .ingest import ensure_dir, read_cube, read_labels, write_split
from .leakage import overlap_rate
from .metrics import EvalReport, aggregate, evaluate
from .rng import mix64
from .sampling import SamplingPlan, Strategy
from .synthgen import GridBlocks, SceneConfig, VoronoiBlobs, generate_scene

log = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "strategy", "rate", "feature", "classifier", "repetition",
    "oa", "aa", "kappa", "overlap_rate", "seed",
)
AGGREGATE_COLUMNS = (
    "strategy", "rate", "feature", "classifier", "repetitions", "failures",
    "oa", "oa_std", "aa", "aa_std", "kappa", "kappa_std", "overlap_rate",
)
SEED_MASK = (1 << 63) - 1
DWT_REACH = 17  # 3x3 smoothing plus Haar shifts of 1, 2 and 4 pixels


@dataclass(frozen=True)
class FeatureSpec:
    kind: str = "raw"
    window: int = 1
    sigma: float = 1.0
    components: int = 3
    radius: int = 4

    @classmethod
    def parse(cls, text: str) -> "FeatureSpec":
        parts = text.strip().lower().split(":")
        kind = parts[0]
        try:
            if kind in ("raw", "coords", "dwt3d") and len(parts) == 1:
                return cls(kind)
            if kind == "mean" and len(parts) == 2:
                WindowSpec.square(int(parts[1]))
                return cls(kind, window=int(parts[1]))
            if kind == "gaussian" and len(parts) == 2:
                GaussianSpec(float(parts[1]))
                return cls(kind, sigma=float(parts[1]))
            if kind == "emp" and len(parts) == 3:
                feat.EmpSpec(int(parts[1]), int(parts[2]))
                return cls(kind, components=int(parts[1]), radius=int(parts[2]))
        except ValueError as exc:
            raise ConfigError(f"bad feature spec {text!r}: {exc}") from None
        raise ConfigError(f"bad feature spec {text!r}")

    @property
    def name(self) -> str:
        if self.kind == "mean":
            return f"mean:{self.window}"
        if self.kind == "gaussian":
            return f"gaussian:{self.sigma:g}"
        if self.kind == "emp":
            return f"emp:{self.components}:{self.radius}"
        return self.kind

    @property
    def effective_window(self) -> int:
        """Side of the square neighbourhood each feature row reads from.

        For EMP this is the nominal reach of erosion plus dilation by the
        largest disk; reconstruction can reach further along flat regions.
        """
        if self.kind == "mean":
            return self.window
        if self.kind == "gaussian":
            return 2 * GaussianSpec(self.sigma).truncation_radius + 1
        if self.kind == "dwt3d":
            return DWT_REACH
        if self.kind == "emp":
            return 4 * self.radius + 1
        return 1

    def feature_map(self, cube: HyperCube) -> np.ndarray:
        if self.kind == "raw":
            return cube.values.astype(np.float64)
        if self.kind == "coords":
            return feat.spatial_coords_map(cube.height, cube.width)
        if self.kind == "mean":
            return mean_filter(cube, WindowSpec.square(self.window)).values
        if self.kind == "gaussian":
            return gaussian_filter(cube, GaussianSpec(self.sigma)).values
        if self.kind == "dwt3d":
            return feat.dwt3d_map(cube)
        if self.kind == "emp":
            return feat.emp_map(cube, feat.EmpSpec(self.components, self.radius))
        raise ConfigError(f"unknown feature kind {self.kind!r}")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "svm"
    k: int = 1
    costs: Tuple[float, ...] = (1.0,)
    epochs: int = 20
    trees: int = 100
    max_depth: Optional[int] = None
    folds: int = 5

    @classmethod
    def parse(cls, text: str, epochs: int = 20) -> "ClassifierSpec":
        parts = text.strip().lower().split(":")
        kind = parts[0]
        try:
            if kind == "knn":
                return cls("knn", k=int(parts[1]) if len(parts) > 1 else 1)
            if kind == "svm":
                costs = tuple(float(c) for c in parts[1].split(",")) if len(parts) > 1 else (1.0,)
                if any(c <= 0 for c in costs):
                    raise ValueError("costs must be > 0")
                return cls("svm", costs=costs, epochs=epochs)
            if kind == "rf":
                trees = int(parts[1]) if len(parts) > 1 else 100
                depth = int(parts[2]) if len(parts) > 2 and int(parts[2]) > 0 else None
                return cls("rf", trees=trees, max_depth=depth)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"bad classifier spec {text!r}: {exc}") from None
        raise ConfigError(f"bad classifier spec {text!r}")

    @property
    def name(self) -> str:
        if self.kind == "knn":
            return f"knn:{self.k}"
        if self.kind == "svm":
            return "svm:" + ",".join(f"{c:g}" for c in self.costs)
        depth = f":{self.max_depth}" if self.max_depth else ""
        return f"rf:{self.trees}{depth}"

    def train(self, x: np.ndarray, y: np.ndarray, seed: int):
        if self.kind == "knn":
            return fit("knn", x, y, {"k": self.k})
        if self.kind == "rf":
            return fit("rf", x, y, {"trees": self.trees, "max_depth": self.max_depth}, seed)
        params = {"cost": self.costs[0], "epochs": self.epochs}
        if len(self.costs) > 1:
            # small classes at low sampling rates cannot fill 5 folds
            folds = min(self.folds, int(np.unique(y, return_counts=True)[1].min()))
            if folds >= 2:
                grid = CvGrid.svm_costs(self.costs, self.epochs, folds)
                params = cross_validate(x, y, grid, seed).best
        return fit("svm", x, y, params, seed)


@dataclass(frozen=True)
class ExperimentConfig:
    scene: Optional[SceneConfig] = None
    cube_path: Optional[str] = None
    labels_path: Optional[str] = None
    strategy: Strategy = Strategy.STRATIFIED
    rates: Tuple[float, ...] = (0.05,)
    feature: FeatureSpec = FeatureSpec()
    classifier: ClassifierSpec = ClassifierSpec()
    repetitions: int = 10
    master_seed: int = 0
    output_dir: Optional[str] = None
    save_splits: bool = False
    save_maps: bool = False

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if not self.rates or any(not 0 < r < 1 for r in self.rates):
            raise ConfigError(f"rates must lie in (0, 1), got {self.rates}")
        if self.scene is None and (self.cube_path is None or self.labels_path is None):
            raise ConfigError("give either a synthetic scene or both cube and labels paths")
        object.__setattr__(self, "strategy", Strategy(self.strategy))

    def load(self) -> Tuple[HyperCube, LabelMap]:
        if self.scene is not None:
            return generate_scene(self.scene)
        cube = read_cube(self.cube_path)
        labels = read_labels(self.labels_path)
        labels.check_matches(cube)
        return cube, labels


def repetition_seed(master_seed: int, repetition: int) -> int:
    return mix64(master_seed, repetition) & SEED_MASK


@dataclass
class RunResult:
    rows: List[Dict[str, object]]
    reports: Dict[float, List[EvalReport]]
    aggregates: Dict[float, EvalReport]
    failures: List[Dict[str, object]] = field(default_factory=list)

    def mean_oa(self, rate: Optional[float] = None) -> float:
        rate = next(iter(self.aggregates)) if rate is None else rate
        return self.aggregates[rate].oa

    def mean_overlap(self, rate: Optional[float] = None) -> float:
        vals = [r["overlap_rate"] for r in self.rows
                if (rate is None or r["rate"] == rate) and not math.isnan(r["overlap_rate"])]
        return float(np.mean(vals)) if vals else float("nan")


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6f}"
    return str(v)


def _write_csv(path: str, columns: Sequence[str], rows: Sequence[Dict[str, object]]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def run_experiment(config: ExperimentConfig, cube: Optional[HyperCube] = None,
                   labels: Optional[LabelMap] = None) -> RunResult:
    """Run every (rate, repetition) of ``config`` and write CSVs if an output dir is set.

    ``cube``/``labels`` may be passed to reuse an already loaded scene.
    """
    if cube is None or labels is None:
        cube, labels = config.load()
    fmap = config.feature.feature_map(cube)
    window = config.feature.effective_window
    rows, failures = [], []
    reports: Dict[float, List[EvalReport]] = {}
    if config.output_dir:
        ensure_dir(config.output_dir)
    for rate in config.rates:
        reports[rate] = []
        for rep in range(config.repetitions):
            seed = repetition_seed(config.master_seed, rep)
            row = {
                "strategy": config.strategy.value, "rate": float(rate),
                "feature": config.feature.name, "classifier": config.classifier.name,
                "repetition": rep, "seed": seed,
                "oa": float("nan"), "aa": float("nan"), "kappa": float("nan"),
                "overlap_rate": float("nan"),
            }
            try:
                split = SamplingPlan(rate, seed, config.strategy).apply(labels)
                tr = np.argwhere(split.train)
                te = np.argwhere(split.test)
                y_tr = labels.labels[tr[:, 0], tr[:, 1]]
                y_te = labels.labels[te[:, 0], te[:, 1]]
                model = config.classifier.train(fmap[tr[:, 0], tr[:, 1]], y_tr, seed)
                pred = model.predict(fmap[te[:, 0], te[:, 1]])
                report = evaluate(pred, y_te, labels.n_classes)
                row.update(oa=report.oa, aa=report.aa, kappa=report.kappa,
                           overlap_rate=overlap_rate(split, window))
                reports[rate].append(report)
                if config.output_dir and config.save_splits:
                    write_split(split, os.path.join(config.output_dir, f"split_{rate:g}_{rep}.txt"))
                if config.output_dir and config.save_maps:
                    grid = np.zeros(labels.shape, dtype=np.int64)
                    grid[tr[:, 0], tr[:, 1]] = y_tr
                    grid[te[:, 0], te[:, 1]] = pred
                    render_map(grid, os.path.join(config.output_dir, f"map_{rate:g}_{rep}.ppm"))
            except (HsiError, ValueError, np.linalg.LinAlgError) as exc:
                log.warning("repetition %d at rate %g failed: %s", rep, rate, exc)
                failures.append({"rate": float(rate), "repetition": rep, "seed": seed,
                                 "error": f"{type(exc).__name__}: {exc}"})
            rows.append(row)
    aggregates = {r: aggregate(reps) for r, reps in reports.items() if reps}
    result = RunResult(rows, reports, aggregates, failures)
    if config.output_dir:
        _write_outputs(config, result)
    return result


def _write_outputs(config: ExperimentConfig, result: RunResult) -> None:
    out = config.output_dir
    _write_csv(os.path.join(out, "results.csv"), RESULT_COLUMNS, result.rows)
    agg_rows = []
    for rate in config.rates:
        n_fail = sum(1 for f in result.failures if f["rate"] == rate)
        base = {
            "strategy": config.strategy.value, "rate": float(rate),
            "feature": config.feature.name, "classifier": config.classifier.name,
            "repetitions": config.repetitions, "failures": n_fail,
            "overlap_rate": result.mean_overlap(rate),
        }
        agg = result.aggregates.get(rate)
        for key in ("oa", "aa", "kappa"):
            base[key] = getattr(agg, key) if agg else float("nan")
            base[key + "_std"] = getattr(agg, key + "_std") if agg else float("nan")
        agg_rows.append(base)
    _write_csv(os.path.join(out, "aggregate.csv"), AGGREGATE_COLUMNS, agg_rows)
    if result.failures:
        with open(os.path.join(out, "failures.csv"), "w") as fh:
            fh.write("rate,repetition,seed,error\n")
            for f in result.failures:
                msg = f["error"].replace(",", ";").replace("\n", " ")
                fh.write(f"{f['rate']:.6f},{f['repetition']},{f['seed']},{msg}\n")


# -- config files -------------------------------------------------------------

def _parse_bool(v: str) -> bool:
    if v.lower() in ("1", "true", "yes", "on"):
        return True
    if v.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def parse_layout(text: str):
    kind, _, arg = text.strip().lower().partition(":")
    try:
        if kind == "voronoi":
            return VoronoiBlobs(int(arg) if arg else 4)
        if kind == "grid":
            return GridBlocks(int(arg) if arg else 8)
    except ValueError:
        pass
    raise ConfigError(f"bad layout {text!r}; use voronoi:<k> or grid:<block>")


_SCENE_KEYS = {
    "scene.height": ("height", int), "scene.width": ("width", int),
    "scene.bands": ("bands", int), "scene.classes": ("classes", int),
    "scene.layout": ("layout", parse_layout),
    "scene.separation": ("signature_separation", float),
    "scene.noise": ("noise_sigma", float), "scene.seed": ("rng_seed", int),
}
_TOP_KEYS = {
    "cube", "labels", "strategy", "rates", "feature", "classifier", "epochs",
    "repetitions", "master_seed", "output_dir", "save_splits", "save_maps",
}


def read_config_text(text: str, base_dir: str = ".") -> ExperimentConfig:
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip().lower(), val.strip()
        if not sep or not key:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        if key not in _TOP_KEYS and key not in _SCENE_KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        values[key] = val
    try:
        scene = None
        if any(k in values for k in _SCENE_KEYS) or "cube" not in values:
            kw = {}
            for key, (attr, conv) in _SCENE_KEYS.items():
                if key in values:
                    kw[attr] = conv(values[key])
            scene = SceneConfig(**kw)

        def path(key):
            if key not in values:
                return None
            p = values[key]
            return p if os.path.isabs(p) else os.path.join(base_dir, p)

        epochs = int(values.get("epochs", 20))
        rates = tuple(float(r) for r in values.get("rates", "0.05").split(","))
        out = path("output_dir") or os.path.join(base_dir, "results")
        return ExperimentConfig(
            scene=scene if "cube" not in values else None,
            cube_path=path("cube"), labels_path=path("labels"),
            strategy=Strategy(values.get("strategy", "stratified").lower()),
            rates=rates,
            feature=FeatureSpec.parse(values.get("feature", "raw")),
            classifier=ClassifierSpec.parse(values.get("classifier", "svm:1"), epochs),
            repetitions=int(values.get("repetitions", 10)),
            master_seed=int(values.get("master_seed", 0)),
            output_dir=out,
            save_splits=_parse_bool(values.get("save_splits", "false")),
            save_maps=_parse_bool(values.get("save_maps", "false")),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad config value: {exc}") from None


def read_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        text = fh.read()
    return read_config_text(text, os.path.dirname(os.path.abspath(path)))


# -- maps ---------------------------------------------------------------------

DEFAULT_PALETTE = (
    (0, 0, 0),
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
)


class PaletteWarning(UserWarning):
    pass


def fallback_color(class_id: int) -> Tuple[int, int, int]:
    h = mix64(0xC0105, class_id)
    return (h & 0xFF, (h >> 8) & 0xFF, (h >> 16) & 0xFF)


def colorize(grid: np.ndarray, palette=DEFAULT_PALETTE) -> np.ndarray:
    """(H, W, 3) uint8 image; class 0 maps to ``palette[0]`` (black by default)."""
    grid = np.asarray(grid, dtype=np.int64)
    rgb = np.zeros(grid.shape + (3,), dtype=np.uint8)
    for c in np.unique(grid):
        if c < len(palette):
            color = palette[c]
        else:
            color = fallback_color(int(c))
            warnings.warn(f"class {c} has no palette entry; using {color}", PaletteWarning)
        rgb[grid == c] = color
    return rgb


def write_ppm(rgb: np.ndarray, path) -> None:
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos].decode("ascii"))
    if tokens[0] != "P6":
        raise FormatError(f"{path}: not a binary PPM")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(data[pos + 1 : pos + 1 + 3 * w * h], dtype=np.uint8).reshape(h, w, 3)


def render_map(grid: np.ndarray, path=None, palette=DEFAULT_PALETTE) -> np.ndarray:
    """Colour a class map (0 = unlabeled, black) and optionally save it as PPM."""
    rgb = colorize(grid, palette)
    if path is not None:
        write_ppm(rgb, path)
    return rgb


def with_overrides(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(config, **changes)
