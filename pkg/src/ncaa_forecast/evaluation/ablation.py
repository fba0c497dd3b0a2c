from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from sklearn.base import clone

from ..features.assemble import group_columns
from .metrics import auc, brier

BASELINE = "none"


@dataclass
class AblationResult:
    removed: str
    auc: float
    brier: float
    auc_delta: float  # ablated minus baseline; negative means the group helped
    brier_delta: float


def _fit_score(estimator, X, y, X_val, y_val, cols):
    est = clone(estimator)
    est.fit(X[:, :, cols], y, X_val[:, :, cols], y_val)
    p = est.predict_proba(X_val[:, :, cols])[:, 1]
    return auc(p, y_val), brier(p, y_val)


def run_ablation(estimator, X, y, X_val, y_val, groups: Sequence[str],
                 remove: Optional[Sequence[str]] = None) -> List[AblationResult]:
    """Retrain ``estimator`` once per removed feature group.

    ``groups`` is the ordered group list that produced the columns of ``X``.
    Every run clones the same estimator, so seeds match across runs and the
    deltas reflect the features rather than initialization noise.
    """
    layout = group_columns(groups)
    remove = list(groups) if remove is None else list(remove)
    unknown = [g for g in remove if g not in layout]
    if unknown:
        raise ValueError(f"cannot remove unknown group(s) {unknown}")
    X = np.asarray(X, dtype=np.float64)
    X_val = np.asarray(X_val, dtype=np.float64)
    all_cols = [c for g in groups for c in layout[g]]

    base_auc, base_brier = _fit_score(estimator, X, y, X_val, y_val, all_cols)
    results = [AblationResult(BASELINE, base_auc, base_brier, 0.0, 0.0)]
    for g in remove:
        cols = [c for other in groups if other != g for c in layout[other]]
        if not cols:
            raise ValueError(f"removing {g!r} leaves no features")
        a, b = _fit_score(estimator, X, y, X_val, y_val, cols)
        results.append(AblationResult(g, a, b, a - base_auc, b - base_brier))
    return results


def write_ablation_csv(results: List[AblationResult], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["removed", "auc", "brier", "auc_delta", "brier_delta"])
        for r in results:
            w.writerow([r.removed, repr(r.auc), repr(r.brier), repr(r.auc_delta), repr(r.brier_delta)])
