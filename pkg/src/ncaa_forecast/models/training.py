"""Minibatch training with early stopping, best-epoch restore and plateau LR decay."""

from __future__ import annotations

import csv
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from ..nn.losses import get_loss
from ..nn.optim import Adam, EarlyStopping, ReduceLROnPlateau

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "train_loss", "val_loss", "val_acc", "lr")


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    loss: str = "bce"
    lr: float = 1e-3
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    lr_plateau_factor: float = 0.5
    lr_plateau_patience: int = 5
    min_lr: float = 1e-6
    seed: int = 0

    def validate(self):
        get_loss(self.loss)
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be >= 1")
        if self.lr <= 0:
            raise ValueError("lr must be positive")


@dataclass
class TrainingHistory:
    epochs: List[dict] = field(default_factory=list)
    best_epoch: Optional[int] = None
    stop_reason: str = ""

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(epochs=[dict(e) for e in d["epochs"]], best_epoch=d["best_epoch"], stop_reason=d["stop_reason"])

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(HISTORY_COLUMNS)
            for e in self.epochs:
                w.writerow([e["epoch"]] + [repr(float(e[c])) for c in HISTORY_COLUMNS[1:]])


def _accuracy(p, y):
    return float(np.mean((p >= 0.5) == (y == 1)))


def train(network, X, y, X_val, y_val, cfg: TrainConfig) -> TrainingHistory:
    """Fit ``network`` in place and leave it holding the best-validation parameters.

    The monitored metric is the training loss evaluated on the validation
    set. Shuffling and dropout draw from two streams spawned from
    ``cfg.seed``, so identical inputs give identical trajectories.
    """
    cfg.validate()
    if len(X_val) == 0:
        raise ValueError("validation set is empty")
    if len(X) == 0:
        raise ValueError("training set is empty")
    loss_fn = get_loss(cfg.loss)
    y = np.asarray(y, dtype=np.float64)
    y_val = np.asarray(y_val, dtype=np.float64)

    shuffle_ss, dropout_ss = np.random.SeedSequence(cfg.seed).spawn(2)
    shuffle_rng = np.random.default_rng(shuffle_ss)
    dropout_rng = np.random.default_rng(dropout_ss)

    opt = Adam(lr=cfg.lr)
    plateau = ReduceLROnPlateau(cfg.lr_plateau_factor, cfg.lr_plateau_patience, cfg.min_lr)
    stopper = EarlyStopping(cfg.patience)
    l2 = network.l2_map()
    history = TrainingHistory()
    best_params = network.snapshot()
    n = len(X)

    for epoch in range(1, cfg.max_epochs + 1):
        order = shuffle_rng.permutation(n)
        total = 0.0
        for b, start in enumerate(range(0, n, cfg.batch_size)):
            idx = order[start:start + cfg.batch_size]
            try:
                p = network.forward(X[idx], training=True, rng=dropout_rng)
            except FloatingPointError as exc:
                raise TrainingError(f"epoch {epoch}, batch {b}: {exc}") from None
            loss, dp = loss_fn(p, y[idx])
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}, batch {b}")
            network.backward(dp)
            opt.step(network.params, network.grads, l2)
            total += loss * len(idx)

        p_val = network.forward(X_val, training=False)
        val_loss, _ = loss_fn(p_val, y_val)
        if not np.isfinite(val_loss):
            raise TrainingError(f"non-finite validation loss at epoch {epoch}")
        history.epochs.append({
            "epoch": epoch, "train_loss": total / n, "val_loss": val_loss,
            "val_acc": _accuracy(p_val, y_val), "lr": opt.lr,
        })
        logger.debug("epoch %d train %.5f val %.5f lr %.2e", epoch, total / n, val_loss, opt.lr)

        stop = stopper.step(val_loss, epoch)
        if stopper.best_epoch == epoch:
            best_params = network.snapshot()
        if stop:
            history.stop_reason = "early_stop"
            break
        opt.lr = plateau.step(val_loss, opt.lr)
    else:
        history.stop_reason = "max_epochs"

    history.best_epoch = stopper.best_epoch
    network.load_params(best_params)
    return history
