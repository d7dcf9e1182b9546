"""Command line interface: ``hsileak <subcommand> ...``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

import numpy as np

from .datamodel import FeatureSet
from .errors import ConfigError, DataError
from .features._select import selection_coords
from .filters import GaussianSpec, WindowSpec, gaussian_filter, mean_filter
from .harness import (
    ClassifierSpec,
    FeatureSpec,
    parse_layout,
    read_config,
    render_map,
    run_experiment,
)
from .ingest import (
    read_cube,
    read_features,
    read_labels,
    read_split,
    write_cube,
    write_features,
    write_labels,
    write_split,
)
from .leakage import correlation_decay, overlap_rate
from .metrics import evaluate
from .sampling import SamplingPlan
from .synthgen import SceneConfig, generate_scene


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _ints(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def cmd_generate(a) -> None:
    cfg = SceneConfig(a.height, a.width, a.bands, a.classes, parse_layout(a.layout),
                      a.separation, a.noise, a.seed)
    cube, labels = generate_scene(cfg)
    os.makedirs(a.out_dir, exist_ok=True)
    write_cube(cube, os.path.join(a.out_dir, "cube_scene.hsic"))
    write_labels(labels, os.path.join(a.out_dir, "labels.txt"))


def cmd_sample(a) -> None:
    labels = read_labels(a.labels)
    write_split(SamplingPlan(a.rate, a.seed, a.strategy).apply(labels), a.out)


def cmd_audit(a) -> None:
    split = read_split(a.split)
    rows = [(w, overlap_rate(split, w)) for w in _ints(a.windows)]
    with _open_out(a.out) as fh:
        fh.write("window,overlap_rate\n")
        for w, v in rows:
            fh.write(f"{w},{v:.6f}\n")


def cmd_filter(a) -> None:
    if (a.mean is None) == (a.gaussian is None):
        raise UsageError("filter: give exactly one of --mean or --gaussian")
    cube = read_cube(a.cube)
    if a.mean is not None:
        out = mean_filter(cube, WindowSpec.square(a.mean))
    else:
        out = gaussian_filter(cube, GaussianSpec(a.gaussian))
    write_cube(out, a.out)


def cmd_features(a) -> None:
    cube = read_cube(a.cube)
    if a.split:
        selection = read_split(a.split).state > 0
    elif a.labels:
        selection = read_labels(a.labels)
    else:
        selection = np.ones((cube.height, cube.width), dtype=bool)
    spec = FeatureSpec.parse(a.kind)
    fmap = spec.feature_map(cube)
    crd = selection_coords(selection, (cube.height, cube.width))
    write_features(FeatureSet(fmap[crd[:, 0], crd[:, 1]], crd), a.out)


def _index_rows(fs: FeatureSet, mask: np.ndarray) -> np.ndarray:
    return mask[fs.coords[:, 0], fs.coords[:, 1]]


def cmd_classify(a) -> None:
    fs = read_features(a.features)
    labels = read_labels(a.labels)
    split = read_split(a.split, labels)
    tr, te = _index_rows(fs, split.train), _index_rows(fs, split.test)
    if not tr.any() or not te.any():
        raise DataError("feature file lacks train or test pixels of the split")
    y = labels.labels[fs.coords[:, 0], fs.coords[:, 1]]
    model = ClassifierSpec.parse(a.classifier, a.epochs).train(fs.vectors[tr], y[tr], a.seed)
    pred = model.predict(fs.vectors[te])
    with _open_out(a.out) as fh:
        fh.write("y,x,truth,prediction\n")
        for (yy, xx), t, p in zip(fs.coords[te], y[te], pred):
            fh.write(f"{yy},{xx},{t},{p}\n")
    if a.map:
        grid = np.zeros(labels.shape, dtype=np.int64)
        grid[fs.coords[te, 0], fs.coords[te, 1]] = pred
        grid[fs.coords[tr, 0], fs.coords[tr, 1]] = y[tr]
        render_map(grid, a.map)


def cmd_evaluate(a) -> None:
    data = np.loadtxt(a.predictions, delimiter=",", skiprows=1, dtype=np.int64, ndmin=2)
    if data.size == 0:
        raise DataError("no predictions to evaluate")
    rep = evaluate(data[:, 3], data[:, 2])
    with _open_out(a.out) as fh:
        fh.write("oa,aa,kappa\n")
        fh.write(f"{rep.oa:.6f},{rep.aa:.6f},{rep.kappa:.6f}\n")


def cmd_run(a) -> None:
    cfg = read_config(a.config)
    if a.seed is not None:
        cfg = replace(cfg, master_seed=a.seed)
    if a.output_dir:
        cfg = replace(cfg, output_dir=a.output_dir)
    run_experiment(cfg)


def cmd_correlate(a) -> None:
    cube = read_cube(a.cube)
    if a.mean and a.mean > 1:
        cube = mean_filter(cube, WindowSpec.square(a.mean))
    curve = correlation_decay(cube, a.axis, a.max_lag)
    with _open_out(a.out) as fh:
        fh.write("lag,rho\n")
        for lag, r in zip(curve.lags, curve.rho):
            fh.write(f"{lag},{r:.6f}\n")


class _open_out:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = sys.stdout if self.path in (None, "-") else open(self.path, "w")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not sys.stdout:
            self.fh.close()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hsileak", description="Hyperspectral sampling and leakage toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--seed", type=int, default=0 if name != "run" else None)
        return sp

    g = add("generate", cmd_generate, "write a synthetic cube and label map")
    g.add_argument("--height", type=int, default=64)
    g.add_argument("--width", type=int, default=64)
    g.add_argument("--bands", type=int, default=16)
    g.add_argument("--classes", type=int, default=4)
    g.add_argument("--layout", default="voronoi:4")
    g.add_argument("--separation", type=float, default=1.0)
    g.add_argument("--noise", type=float, default=0.1)
    g.add_argument("--out-dir", required=True)

    s = add("sample", cmd_sample, "split a label map into train/test")
    s.add_argument("--labels", required=True)
    s.add_argument("--strategy", choices=("stratified", "controlled"), default="stratified")
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--out", required=True)

    au = add("audit", cmd_audit, "overlap rate of a split for several windows")
    au.add_argument("--split", required=True)
    au.add_argument("--windows", default="1,3,5,7,9")
    au.add_argument("--out")

    f = add("filter", cmd_filter, "smooth every band of a cube")
    f.add_argument("--cube", required=True)
    f.add_argument("--mean", type=int)
    f.add_argument("--gaussian", type=float)
    f.add_argument("--out", required=True)

    fe = add("features", cmd_features, "extract per-pixel features to CSV")
    fe.add_argument("--cube", required=True)
    fe.add_argument("--kind", default="raw", help="raw, coords, mean:W, gaussian:S, dwt3d, emp:M:N")
    fe.add_argument("--labels")
    fe.add_argument("--split")
    fe.add_argument("--out", required=True)

    c = add("classify", cmd_classify, "train on Train rows, predict Test rows")
    c.add_argument("--features", required=True)
    c.add_argument("--labels", required=True)
    c.add_argument("--split", required=True)
    c.add_argument("--classifier", default="svm:1")
    c.add_argument("--epochs", type=int, default=20)
    c.add_argument("--out", required=True)
    c.add_argument("--map", help="also write a PPM classification map")

    e = add("evaluate", cmd_evaluate, "OA/AA/kappa of a predictions CSV")
    e.add_argument("--predictions", required=True)
    e.add_argument("--out")

    r = add("run", cmd_run, "run a full experiment from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--output-dir")

    co = add("correlate", cmd_correlate, "spectral correlation versus lag")
    co.add_argument("--cube", required=True)
    co.add_argument("--axis", choices=("x", "y"), default="x")
    co.add_argument("--max-lag", type=int, default=4)
    co.add_argument("--mean", type=int, help="mean-filter window applied first")
    co.add_argument("--out")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"hsileak: configuration error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, ValueError) as exc:
        print(f"hsileak: data error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
