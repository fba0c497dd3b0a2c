from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.preprocessing import StandardScaler
from sklearn.utils.validation import check_is_fitted


class MatchupScaler(TransformerMixin, BaseEstimator):
    """Column standardization for (n, 2, d) matchup tensors.

    Both team rows are pooled when estimating each column's mean and
    standard deviation, so team 1 and team 2 share one scale. Plain
    (n, d) input is also accepted. Zero-variance columns keep unit scale.
    """

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        self._scaler = StandardScaler().fit(X.reshape(-1, X.shape[-1]))
        self.mean_ = self._scaler.mean_
        self.scale_ = self._scaler.scale_
        self.n_features_in_ = X.shape[-1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features per team, got {X.shape[-1]}")
        return (X - self.mean_) / self.scale_

    def to_dict(self):
        check_is_fitted(self, "mean_")
        return {"mean": self.mean_.tolist(), "scale": self.scale_.tolist()}

    @classmethod
    def from_dict(cls, d):
        s = cls()
        s.mean_ = np.asarray(d["mean"], dtype=np.float64)
        s.scale_ = np.asarray(d["scale"], dtype=np.float64)
        s.n_features_in_ = s.mean_.size
        return s
