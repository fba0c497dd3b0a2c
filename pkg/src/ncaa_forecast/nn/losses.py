"""Mean binary losses on probabilities. Each returns ``(loss, dloss/dp)``."""

from __future__ import annotations

import numpy as np

BCE_EPS = 1e-12


def bce_loss(p, y):
    p = np.clip(np.asarray(p, dtype=np.float64), BCE_EPS, 1.0 - BCE_EPS)
    y = np.asarray(y, dtype=np.float64)
    n = p.size
    loss = -np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
    grad = (p - y) / (p * (1.0 - p)) / n
    return float(loss), grad


def brier_loss(p, y):
    p = np.asarray(p, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    diff = p - y
    return float(np.mean(diff * diff)), 2.0 * diff / p.size


LOSSES = {"bce": bce_loss, "brier": brier_loss}


def get_loss(name):
    try:
        return LOSSES[name]
    except KeyError:
        raise ValueError(f"unknown loss {name!r}; expected one of {sorted(LOSSES)}") from None
