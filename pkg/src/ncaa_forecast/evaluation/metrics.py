"""Accuracy, rank AUC, Brier score, expected calibration error and reliability bins."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import List

import numpy as np
from scipy.stats import rankdata

from ..nn.losses import brier_loss


def _arrays(p, y):
    p = np.asarray(p, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if p.shape != y.shape:
        raise ValueError(f"length mismatch: {p.size} predictions, {y.size} labels")
    if p.size == 0:
        raise ValueError("empty input")
    return p, y


def accuracy(p, y, threshold=0.5):
    """Fraction correct, predicting team 1 whenever ``p >= threshold``."""
    p, y = _arrays(p, y)
    return float(np.mean((p >= threshold) == (y == 1)))


def auc(p, y):
    """Mann-Whitney AUC from average ranks; tied pairs earn half credit."""
    p, y = _arrays(p, y)
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = p.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: labels contain a single class")
    ranks = rankdata(p)  # average ranks for ties
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def brier(p, y):
    p, y = _arrays(p, y)
    return brier_loss(p, y)[0]


def _bin_index(p, n_bins):
    # bins are right-closed, except the first which also includes 0
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    idx = np.searchsorted(edges, p, side="left") - 1
    return np.clip(idx, 0, n_bins - 1), edges


@dataclass
class ReliabilityBin:
    bin_low: float
    bin_high: float
    mean_conf: float
    acc: float
    count: int


def reliability_bins(p, y, n_bins=10) -> List[ReliabilityBin]:
    """Equal-width bins over [0, 1]. Empty bins carry NaN statistics and count 0."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    p, y = _arrays(p, y)
    idx, edges = _bin_index(p, n_bins)
    out = []
    for b in range(n_bins):
        m = idx == b
        c = int(m.sum())
        out.append(ReliabilityBin(
            bin_low=float(edges[b]), bin_high=float(edges[b + 1]),
            mean_conf=float(p[m].mean()) if c else math.nan,
            acc=float(y[m].mean()) if c else math.nan,
            count=c,
        ))
    return out


def ece_from_bins(bins: List[ReliabilityBin]):
    n = sum(b.count for b in bins)
    return float(sum(b.count / n * abs(b.acc - b.mean_conf) for b in bins if b.count))


def ece(p, y, n_bins=10):
    return ece_from_bins(reliability_bins(p, y, n_bins))


def write_reliability_csv(bins: List[ReliabilityBin], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_low", "bin_high", "mean_conf", "acc", "count"])
        for b in bins:
            w.writerow([repr(b.bin_low), repr(b.bin_high),
                        "" if b.count == 0 else repr(b.mean_conf),
                        "" if b.count == 0 else repr(b.acc), b.count])


@dataclass
class EvalReport:
    n: int
    accuracy: float
    auc: float
    brier: float
    ece: float
    bins: List[ReliabilityBin] = field(default_factory=list)

    def metrics(self):
        return {"n": self.n, "accuracy": self.accuracy, "auc": self.auc, "brier": self.brier, "ece": self.ece}

    def to_json(self, path):
        d = self.metrics()
        d["bins"] = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(b).items()}
                     for b in self.bins]
        with open(path, "w") as fh:
            json.dump(d, fh, indent=2, sort_keys=True)

    def to_csv(self, path):
        m = self.metrics()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(list(m))
            w.writerow([repr(v) if isinstance(v, float) else v for v in m.values()])


def evaluate(p, y, n_bins=10) -> EvalReport:
    """All metrics at once. AUC falls back to 0.5 when every prediction is tied."""
    p, y = _arrays(p, y)
    try:
        auc_value = auc(p, y)
    except ValueError:
        if np.all(p == p[0]):
            auc_value = 0.5
        else:
            raise
    bins = reliability_bins(p, y, n_bins)
    return EvalReport(n=int(p.size), accuracy=accuracy(p, y), auc=auc_value,
                      brier=brier(p, y), ece=ece_from_bins(bins), bins=bins)
