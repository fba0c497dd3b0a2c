"""scikit-learn style wrappers around the forecaster networks.

Inputs are matchup tensors of shape (n, 2, d): row 0 describes team 1 and
row 1 team 2. ``predict_proba`` follows the classifier convention and
returns columns ``[P(team 2 wins), P(team 1 wins)]``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import check_classification_targets
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..features.scaling import MatchupScaler
from .checkpoint import ModelCheckpoint, symmetric_probs
from .networks import LstmConfig, TransformerConfig, build_lstm, build_transformer, config_dict
from .training import TrainConfig, train


def _check_matchups(X):
    X = check_array(X, allow_nd=True, dtype=np.float64)
    if X.ndim != 3 or X.shape[1] != 2:
        raise ValueError(f"expected matchup tensor of shape (n, 2, d), got {X.shape}")
    return X


class _BaseForecaster(ClassifierMixin, BaseEstimator):
    arch = ""

    def _network_config(self, d):
        raise NotImplementedError

    def _build(self, cfg):
        raise NotImplementedError

    def _train_config(self):
        return TrainConfig(
            loss=self.loss, lr=self.learning_rate, batch_size=self.batch_size,
            max_epochs=self.max_epochs, patience=self.patience,
            lr_plateau_factor=self.lr_plateau_factor, lr_plateau_patience=self.lr_plateau_patience,
            min_lr=self.min_lr, seed=self.random_state,
        )

    def fit(self, X, y, X_val=None, y_val=None):
        """Train on ``(X, y)``, monitoring ``(X_val, y_val)``.

        Without an explicit validation set the trailing
        ``validation_fraction`` of rows is held out (no shuffling, so
        time-ordered input keeps a temporal split).
        """
        X, y = check_X_y(X, y, allow_nd=True, dtype=np.float64)
        X = _check_matchups(X)
        check_classification_targets(y)
        if not set(np.unique(y)) <= {0, 1}:
            raise ValueError("labels must be 0/1")
        y = y.astype(np.int64)
        if X_val is None:
            n_val = max(1, int(round(len(X) * self.validation_fraction)))
            if n_val >= len(X):
                raise ValueError("not enough rows to hold out a validation set")
            X, X_val = X[:-n_val], X[-n_val:]
            y, y_val = y[:-n_val], y[-n_val:]
        else:
            X_val = _check_matchups(X_val)
            y_val = np.asarray(y_val).astype(np.int64)

        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[2]
        self.scaler_ = MatchupScaler().fit(X) if self.scale else None
        if self.scaler_ is not None:
            X, X_val = self.scaler_.transform(X), self.scaler_.transform(X_val)

        cfg = self._network_config(X.shape[2])
        self.network_ = self._build(cfg)
        tcfg = self._train_config()
        self.history_ = train(self.network_, X, y, X_val, y_val, tcfg)
        self.checkpoint_ = ModelCheckpoint(
            arch=self.arch,
            config=config_dict(cfg),
            params=self.network_.snapshot(),
            scaler=self.scaler_,
            history=self.history_,
            train_config=dict(tcfg.__dict__),
            estimator_params=self.get_params(),
            feature_names=getattr(self, "feature_names_", None),
        )
        self.checkpoint_._network = self.network_
        return self

    def _positive_proba(self, X):
        check_is_fitted(self, "network_")
        X = _check_matchups(X)
        if X.shape[2] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features per team, got {X.shape[2]}")

        def raw(A):
            if self.scaler_ is not None:
                A = self.scaler_.transform(A)
            return self.network_.forward(A, training=False)

        return symmetric_probs(raw, X) if self.symmetric else raw(X)

    def predict_proba(self, X):
        p = self._positive_proba(X)
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self._positive_proba(X) >= 0.5).astype(np.int64)

    def save(self, path):
        check_is_fitted(self, "checkpoint_")
        self.checkpoint_.save(path)

    @staticmethod
    def load(path):
        return forecaster_from_checkpoint(ModelCheckpoint.load(path))


class LSTMForecaster(_BaseForecaster):
    """LSTM(hidden) -> dropout -> dense ReLU -> dropout -> sigmoid."""

    arch = "lstm"

    def __init__(self, hidden_size=32, dense_units=16, dropout=0.5, l2=1e-4, loss="bce",
                 learning_rate=1e-3, batch_size=32, max_epochs=100, patience=10,
                 lr_plateau_factor=0.5, lr_plateau_patience=5, min_lr=1e-6,
                 validation_fraction=0.1, scale=True, symmetric=False, random_state=0):
        self.hidden_size = hidden_size
        self.dense_units = dense_units
        self.dropout = dropout
        self.l2 = l2
        self.loss = loss
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.lr_plateau_factor = lr_plateau_factor
        self.lr_plateau_patience = lr_plateau_patience
        self.min_lr = min_lr
        self.validation_fraction = validation_fraction
        self.scale = scale
        self.symmetric = symmetric
        self.random_state = random_state

    def _network_config(self, d):
        return LstmConfig(input_dim=d, hidden=self.hidden_size, dense=self.dense_units,
                          dropout=self.dropout, l2=self.l2)

    def _build(self, cfg):
        return build_lstm(cfg, seed=self.random_state)


class TransformerForecaster(_BaseForecaster):
    """Input projection, one encoder block, flattened into a dense sigmoid head."""

    arch = "transformer"

    def __init__(self, d_model=64, n_heads=2, ff_dim=64, head_units=(64, 16), positional=True,
                 dropout=0.5, l2=1e-4, loss="bce", learning_rate=1e-4, batch_size=32,
                 max_epochs=100, patience=10, lr_plateau_factor=0.5, lr_plateau_patience=5,
                 min_lr=1e-6, validation_fraction=0.1, scale=True, symmetric=False, random_state=0):
        self.d_model = d_model
        self.n_heads = n_heads
        self.ff_dim = ff_dim
        self.head_units = head_units
        self.positional = positional
        self.dropout = dropout
        self.l2 = l2
        self.loss = loss
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.lr_plateau_factor = lr_plateau_factor
        self.lr_plateau_patience = lr_plateau_patience
        self.min_lr = min_lr
        self.validation_fraction = validation_fraction
        self.scale = scale
        self.symmetric = symmetric
        self.random_state = random_state

    def _network_config(self, d):
        return TransformerConfig(input_dim=d, d_model=self.d_model, heads=self.n_heads,
                                 ff_dim=self.ff_dim, head_units=tuple(self.head_units),
                                 dropout=self.dropout, positional=self.positional, l2=self.l2)

    def _build(self, cfg):
        return build_transformer(cfg, seed=self.random_state)


FORECASTERS = {"lstm": LSTMForecaster, "transformer": TransformerForecaster}


def make_forecaster(model, **params):
    try:
        cls = FORECASTERS[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(FORECASTERS)}") from None
    return cls(**params)


def forecaster_from_checkpoint(ckpt: ModelCheckpoint):
    """Rebuild a fitted estimator from a checkpoint without retraining."""
    params = dict(ckpt.estimator_params)
    if "head_units" in params:
        params["head_units"] = tuple(params["head_units"])
    est = make_forecaster(ckpt.arch, **params)
    est.classes_ = np.array([0, 1])
    est.n_features_in_ = ckpt.input_dim
    est.scaler_ = ckpt.scaler
    est.network_ = ckpt.network()
    est.history_ = ckpt.history
    est.checkpoint_ = ckpt
    return est
