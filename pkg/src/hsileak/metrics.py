"""Overall accuracy, average accuracy and Cohen's kappa.

Average accuracy only averages classes that actually occur in the test set:
a class with an empty truth row is skipped rather than scored as 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .datamodel import ConfusionMatrix
from .errors import DataError


def confusion(pred, truth, n_classes: Optional[int] = None) -> ConfusionMatrix:
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.shape != truth.shape:
        raise DataError(f"{pred.size} predictions for {truth.size} truth labels")
    if truth.size and truth.min() < 1:
        raise DataError("truth labels must be class ids >= 1")
    if pred.size and pred.min() < 1:
        raise DataError("predicted labels must be class ids >= 1")
    c = n_classes or int(max(truth.max(initial=0), pred.max(initial=0)))
    counts = np.zeros((c, c), dtype=np.int64)
    np.add.at(counts, (truth - 1, pred - 1), 1)
    return ConfusionMatrix(counts)


def per_class_recall(m: ConfusionMatrix) -> np.ndarray:
    """Recall per class; NaN for classes absent from the truth."""
    rows = m.counts.sum(axis=1).astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(rows > 0, np.diag(m.counts) / rows, np.nan)


def oa_aa_kappa(m: ConfusionMatrix) -> Tuple[float, float, float]:
    total = m.total
    if total == 0:
        raise DataError("empty confusion matrix")
    counts = m.counts.astype(np.float64)
    oa = float(np.trace(counts) / total)
    rec = per_class_recall(m)
    aa = float(np.nanmean(rec))
    pe = float((counts.sum(axis=1) * counts.sum(axis=0)).sum() / total ** 2)
    if pe == 1.0:
        if oa == 1.0:
            return oa, aa, 1.0
        raise DataError("kappa undefined: chance agreement is 1")
    return oa, aa, (oa - pe) / (1.0 - pe)


@dataclass(frozen=True)
class EvalReport:
    oa: float
    aa: float
    kappa: float
    per_class_recall: np.ndarray = field(repr=False)
    matrix: Optional[ConfusionMatrix] = field(default=None, repr=False)
    repetitions: int = 1
    oa_std: float = 0.0
    aa_std: float = 0.0
    kappa_std: float = 0.0


def evaluate(pred, truth, n_classes: Optional[int] = None) -> EvalReport:
    m = confusion(pred, truth, n_classes)
    oa, aa, kappa = oa_aa_kappa(m)
    return EvalReport(oa, aa, kappa, per_class_recall(m), m)


def _mean_std(values) -> Tuple[float, float]:
    v = np.asarray(values, dtype=np.float64)
    return float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0


def aggregate(reports: Sequence[EvalReport]) -> EvalReport:
    """Mean and sample (n-1) std over repetitions; a single report gets std 0."""
    if not reports:
        raise DataError("nothing to aggregate")
    oa, oa_s = _mean_std([r.oa for r in reports])
    aa, aa_s = _mean_std([r.aa for r in reports])
    ka, ka_s = _mean_std([r.kappa for r in reports])
    recalls = [r.per_class_recall for r in reports]
    width = max(len(r) for r in recalls)
    padded = np.full((len(recalls), width), np.nan)
    for i, r in enumerate(recalls):
        padded[i, : len(r)] = r
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rec = np.nanmean(padded, axis=0)
    return EvalReport(oa, aa, ka, rec, None, len(reports), oa_s, aa_s, ka_s)
