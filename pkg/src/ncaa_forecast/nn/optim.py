"""Adam, plateau learning-rate decay and early stopping."""

from __future__ import annotations

import math

import numpy as np


class Adam:
    """Bias-corrected Adam with coupled L2 (``lambda * w`` added to the gradient)."""

    def __init__(self, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {}
        self.v = {}

    def step(self, params, grads, l2=None):
        """Update ``params`` in place. ``l2`` maps parameter name to its penalty coefficient."""
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for name, w in params.items():
            g = grads[name]
            if g.shape != w.shape:
                raise ValueError(f"gradient shape {g.shape} does not match parameter {name} shape {w.shape}")
            lam = l2.get(name, 0.0) if l2 else 0.0
            if lam:
                g = g + lam * w
            if name not in self.m:
                self.m[name] = np.zeros_like(w)
                self.v[name] = np.zeros_like(w)
            m, v = self.m[name], self.v[name]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            w -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def state_dict(self):
        return {
            "t": self.t, "lr": self.lr,
            "m": {k: v.copy() for k, v in self.m.items()},
            "v": {k: v.copy() for k, v in self.v.items()},
        }


class ReduceLROnPlateau:
    """Multiply the learning rate by ``factor`` after ``patience`` epochs without improvement."""

    def __init__(self, factor=0.5, patience=5, min_lr=1e-6):
        if not 0.0 < factor < 1.0:
            raise ValueError("factor must be in (0, 1)")
        self.factor = factor
        self.patience = patience
        self.min_lr = min_lr
        self.best = math.inf
        self.wait = 0

    def step(self, metric, lr):
        if metric < self.best:
            self.best = metric
            self.wait = 0
            return lr
        self.wait += 1
        if self.wait >= self.patience:
            self.wait = 0
            return max(lr * self.factor, self.min_lr)
        return lr


class EarlyStopping:
    """Tracks the best epoch; ``step`` returns True when training should stop."""

    def __init__(self, patience=10):
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.patience = patience
        self.best = math.inf
        self.best_epoch = None
        self.wait = 0

    def step(self, metric, epoch):
        if metric < self.best:
            self.best = metric
            self.best_epoch = epoch
            self.wait = 0
            return False
        self.wait += 1
        return self.wait >= self.patience
