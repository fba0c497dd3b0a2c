"""JSON checkpoint: architecture, parameters, scaler and training history."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..features.scaling import MatchupScaler
from .networks import build_network
from .training import TrainingHistory

FORMAT_VERSION = 1


def _encode_array(a):
    return {"shape": list(a.shape), "values": a.reshape(-1).tolist()}


def _decode_array(d):
    return np.asarray(d["values"], dtype=np.float64).reshape(d["shape"])


@dataclass
class ModelCheckpoint:
    arch: str
    config: dict
    params: Dict[str, np.ndarray]
    scaler: Optional[MatchupScaler] = None
    history: Optional[TrainingHistory] = None
    train_config: dict = field(default_factory=dict)
    estimator_params: dict = field(default_factory=dict)
    feature_names: Optional[List[str]] = None
    feature_groups: Optional[List[str]] = None
    optimizer: Optional[dict] = None

    def network(self):
        if getattr(self, "_network", None) is None:
            net = build_network(self.arch, self.config)
            net.load_params(self.params)
            self._network = net
        return self._network

    @property
    def input_dim(self):
        return int(self.config["input_dim"])

    def to_dict(self):
        d = {
            "format_version": FORMAT_VERSION,
            "arch": self.arch,
            "config": self.config,
            "params": {k: _encode_array(v) for k, v in sorted(self.params.items())},
            "scaler": self.scaler.to_dict() if self.scaler is not None else None,
            "history": self.history.to_dict() if self.history is not None else None,
            "train_config": self.train_config,
            "estimator_params": self.estimator_params,
            "feature_names": self.feature_names,
            "feature_groups": self.feature_groups,
        }
        if self.optimizer is not None:
            opt = self.optimizer
            d["optimizer"] = {
                "t": opt["t"], "lr": opt["lr"],
                "m": {k: _encode_array(v) for k, v in sorted(opt["m"].items())},
                "v": {k: _encode_array(v) for k, v in sorted(opt["v"].items())},
            }
        return d

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint format {d.get('format_version')!r}")
        opt = d.get("optimizer")
        if opt is not None:
            opt = {
                "t": opt["t"], "lr": opt["lr"],
                "m": {k: _decode_array(v) for k, v in opt["m"].items()},
                "v": {k: _decode_array(v) for k, v in opt["v"].items()},
            }
        return cls(
            arch=d["arch"],
            config=d["config"],
            params={k: _decode_array(v) for k, v in d["params"].items()},
            scaler=MatchupScaler.from_dict(d["scaler"]) if d.get("scaler") else None,
            history=TrainingHistory.from_dict(d["history"]) if d.get("history") else None,
            train_config=d.get("train_config", {}),
            estimator_params=d.get("estimator_params", {}),
            feature_names=d.get("feature_names"),
            feature_groups=d.get("feature_groups"),
            optimizer=opt,
        )

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def predict_proba(checkpoint: ModelCheckpoint, X) -> np.ndarray:
    """Team-1 win probabilities for raw (unscaled) samples of shape (n, 2, d)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 3 or X.shape[1] != 2 or X.shape[2] != checkpoint.input_dim:
        raise ValueError(f"expected samples of shape (n, 2, {checkpoint.input_dim}), got {X.shape}")
    if checkpoint.scaler is not None:
        X = checkpoint.scaler.transform(X)
    return checkpoint.network().forward(X, training=False)


def symmetric_probs(predict_fn, X) -> np.ndarray:
    """Average a prediction with its reversed-orientation complement.

    Each sample is evaluated in a canonical orientation (team rows in
    lexicographic order), so both orientations of a pair see the same
    averaged value. The favoured side gets ``hi >= 0.5`` and the other
    ``1 - hi``, which is exact in floating point for ``hi`` in [0.5, 1];
    hence ``f(a, b) == 1 - f(b, a)`` holds bit-for-bit in both directions.
    Samples whose two rows are identical get exactly 0.5.
    """
    X = np.asarray(X, dtype=np.float64)
    diff = X[:, 0, :] - X[:, 1, :]
    nonzero = diff != 0
    distinct = nonzero.any(axis=1)
    first = np.argmax(nonzero, axis=1)
    canonical = ~distinct | (diff[np.arange(len(X)), first] < 0)
    Xc = np.where(canonical[:, None, None], X, X[:, ::-1, :])
    p_fwd = predict_fn(Xc)
    p_rev = predict_fn(Xc[:, ::-1, :])
    s = np.where(distinct, (p_fwd + 1.0 - p_rev) / 2.0, 0.5)
    hi = np.where(s >= 0.5, s, 1.0 - s)
    lo = 1.0 - hi
    v_can = np.where(s >= 0.5, hi, lo)
    v_other = np.where(s >= 0.5, lo, hi)
    return np.where(canonical, v_can, v_other)


def symmetric_predict(checkpoint: ModelCheckpoint, X) -> np.ndarray:
    return symmetric_probs(lambda A: predict_proba(checkpoint, A), X)
