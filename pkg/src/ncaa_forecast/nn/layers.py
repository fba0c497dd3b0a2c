"""Layers with hand-written backward passes.

Every layer keeps its parameters in ``params`` and, after ``backward``,
the matching gradients in ``grads`` (same names, same shapes). Names in
``decay`` receive the L2 penalty during optimization. ``forward`` caches
whatever ``backward`` needs, so calls must alternate forward/backward.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

_PROB_EPS = 1e-15


def glorot_uniform(rng, fan_in, fan_out, shape=None):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape or (fan_in, fan_out))


def check_finite(a, where):
    if not np.all(np.isfinite(a)):
        raise FloatingPointError(f"non-finite values produced by {where}")
    return a


class Layer:
    def __init__(self):
        self.params = {}
        self.grads = {}
        self.decay = set()

    def zero_grad(self):
        self.grads = {k: np.zeros_like(v) for k, v in self.params.items()}

    def forward(self, x, training=False, rng=None):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    @property
    def n_params(self):
        return sum(v.size for v in self.params.values())


class Dense(Layer):
    """``y = x @ W + b`` over the last axis; leading axes are batch axes."""

    def __init__(self, n_in, n_out, rng=None):
        super().__init__()
        rng = rng if rng is not None else np.random.default_rng(0)
        self.params = {"W": glorot_uniform(rng, n_in, n_out), "b": np.zeros(n_out)}
        self.decay = {"W"}
        self.zero_grad()

    def forward(self, x, training=False, rng=None):
        W = self.params["W"]
        if x.shape[-1] != W.shape[0]:
            raise ValueError(f"dense: input shape {x.shape} incompatible with weight shape {W.shape}")
        self._x = x
        return x @ W + self.params["b"]

    def backward(self, dy):
        x = self._x
        W = self.params["W"]
        x2 = x.reshape(-1, x.shape[-1])
        dy2 = dy.reshape(-1, dy.shape[-1])
        self.grads["W"] = x2.T @ dy2
        self.grads["b"] = dy2.sum(axis=0)
        return dy @ W.T


class ReLU(Layer):
    def forward(self, x, training=False, rng=None):
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, dy):
        return dy * self._mask


class Sigmoid(Layer):
    def forward(self, x, training=False, rng=None):
        self._p = np.clip(expit(x), _PROB_EPS, 1.0 - _PROB_EPS)
        return self._p

    def backward(self, dy):
        p = self._p
        return dy * p * (1.0 - p)


class Dropout(Layer):
    """Inverted dropout: survivors are scaled by 1/(1-rate) so eval mode is the identity."""

    def __init__(self, rate):
        super().__init__()
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate

    def forward(self, x, training=False, rng=None):
        if not training or self.rate == 0.0:
            self._mask = None
            return x
        if rng is None:
            raise ValueError("dropout in training mode needs an rng")
        self._mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, dy):
        return dy if self._mask is None else dy * self._mask


class Flatten(Layer):
    def forward(self, x, training=False, rng=None):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return dy.reshape(self._shape)


class LSTM(Layer):
    """Single-layer LSTM returning the final hidden state.

    Input ``(n, T, d)``; gates are packed in the order input, forget,
    candidate, output along the ``4h`` axis of ``W`` (d x 4h), ``U``
    (h x 4h) and ``b`` (4h). Hidden and cell states start at zero.
    """

    def __init__(self, n_in, hidden, rng=None):
        super().__init__()
        rng = rng if rng is not None else np.random.default_rng(0)
        self.hidden = hidden
        self.params = {
            "W": glorot_uniform(rng, n_in, 4 * hidden),
            "U": glorot_uniform(rng, hidden, 4 * hidden),
            "b": np.zeros(4 * hidden),
        }
        self.decay = {"W", "U"}
        self.zero_grad()

    def forward(self, x, training=False, rng=None):
        if x.ndim != 3 or x.shape[2] != self.params["W"].shape[0]:
            raise ValueError(f"lstm: expected input (n, T, {self.params['W'].shape[0]}), got {x.shape}")
        n, T, _ = x.shape
        h_dim = self.hidden
        W, U, b = self.params["W"], self.params["U"], self.params["b"]
        h = np.zeros((n, h_dim))
        c = np.zeros((n, h_dim))
        cache = []
        for t in range(T):
            z = x[:, t, :] @ W + h @ U + b
            i = expit(z[:, :h_dim])
            f = expit(z[:, h_dim:2 * h_dim])
            g = np.tanh(z[:, 2 * h_dim:3 * h_dim])
            o = expit(z[:, 3 * h_dim:])
            c_prev, h_prev = c, h
            c = f * c_prev + i * g
            tc = np.tanh(c)
            h = o * tc
            cache.append((x[:, t, :], h_prev, c_prev, i, f, g, o, tc))
        self._cache = cache
        return h

    def backward(self, dh):
        W, U = self.params["W"], self.params["U"]
        dW = np.zeros_like(W)
        dU = np.zeros_like(U)
        db = np.zeros_like(self.params["b"])
        T = len(self._cache)
        n = dh.shape[0]
        dx = np.zeros((n, T, W.shape[0]))
        dc = np.zeros_like(dh)
        for t in reversed(range(T)):
            x_t, h_prev, c_prev, i, f, g, o, tc = self._cache[t]
            do = dh * tc
            dc = dc + dh * o * (1.0 - tc * tc)
            di = dc * g
            dg = dc * i
            df = dc * c_prev
            dz = np.concatenate([
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g * g),
                do * o * (1.0 - o),
            ], axis=1)
            dW += x_t.T @ dz
            dU += h_prev.T @ dz
            db += dz.sum(axis=0)
            dx[:, t, :] = dz @ W.T
            dh = dz @ U.T
            dc = dc * f
        self.grads = {"W": dW, "U": dU, "b": db}
        return dx


def softmax(s, axis=-1):
    s = s - s.max(axis=axis, keepdims=True)
    e = np.exp(s)
    return e / e.sum(axis=axis, keepdims=True)


class MultiHeadAttention(Layer):
    """Scaled dot-product self-attention over ``(n, T, m)`` with ``heads`` heads of size m/heads."""

    def __init__(self, dim, heads, rng=None):
        super().__init__()
        if heads < 1 or dim % heads != 0:
            raise ValueError(f"model dim {dim} is not divisible by {heads} heads")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.dim = dim
        self.heads = heads
        self.head_dim = dim // heads
        for name in ("q", "k", "v", "o"):
            self.params["W" + name] = glorot_uniform(rng, dim, dim)
            self.params["b" + name] = np.zeros(dim)
        self.decay = {"Wq", "Wk", "Wv", "Wo"}
        self.zero_grad()

    def _split(self, a):
        n, T, _ = a.shape
        return a.reshape(n, T, self.heads, self.head_dim).transpose(0, 2, 1, 3)

    def _merge(self, a):
        n, _, T, _ = a.shape
        return a.transpose(0, 2, 1, 3).reshape(n, T, self.dim)

    def forward(self, x, training=False, rng=None):
        if x.ndim != 3 or x.shape[2] != self.dim:
            raise ValueError(f"attention: expected input (n, T, {self.dim}), got {x.shape}")
        p = self.params
        q = self._split(x @ p["Wq"] + p["bq"])
        k = self._split(x @ p["Wk"] + p["bk"])
        v = self._split(x @ p["Wv"] + p["bv"])
        scores = q @ k.transpose(0, 1, 3, 2) / np.sqrt(self.head_dim)
        attn = softmax(scores)
        ctx = self._merge(attn @ v)
        self._cache = (x, q, k, v, attn, ctx)
        self.attention_weights_ = attn
        return ctx @ p["Wo"] + p["bo"]

    def backward(self, dy):
        x, q, k, v, attn, ctx = self._cache
        p = self.params
        m = self.dim
        g = {}
        g["Wo"] = ctx.reshape(-1, m).T @ dy.reshape(-1, m)
        g["bo"] = dy.reshape(-1, m).sum(axis=0)
        dctx = self._split(dy @ p["Wo"].T)
        dattn = dctx @ v.transpose(0, 1, 3, 2)
        dv = attn.transpose(0, 1, 3, 2) @ dctx
        dscores = attn * (dattn - np.sum(dattn * attn, axis=-1, keepdims=True))
        dscores /= np.sqrt(self.head_dim)
        dq = dscores @ k
        dk = dscores.transpose(0, 1, 3, 2) @ q
        x2 = x.reshape(-1, m)
        dx = np.zeros_like(x)
        for name, d in (("q", dq), ("k", dk), ("v", dv)):
            d = self._merge(d)
            g["W" + name] = x2.T @ d.reshape(-1, m)
            g["b" + name] = d.reshape(-1, m).sum(axis=0)
            dx += d @ p["W" + name].T
        self.grads = g
        return dx


class LayerNorm(Layer):
    def __init__(self, dim, eps=1e-5):
        super().__init__()
        self.eps = eps
        self.params = {"gain": np.ones(dim), "bias": np.zeros(dim)}
        self.zero_grad()

    def forward(self, x, training=False, rng=None):
        mu = x.mean(axis=-1, keepdims=True)
        var = x.var(axis=-1, keepdims=True)
        inv_std = 1.0 / np.sqrt(var + self.eps)
        xhat = (x - mu) * inv_std
        self._cache = (xhat, inv_std)
        return xhat * self.params["gain"] + self.params["bias"]

    def backward(self, dy):
        xhat, inv_std = self._cache
        m = xhat.shape[-1]
        axes = tuple(range(dy.ndim - 1))
        self.grads = {"gain": np.sum(dy * xhat, axis=axes), "bias": np.sum(dy, axis=axes)}
        dxhat = dy * self.params["gain"]
        return (inv_std / m) * (
            m * dxhat
            - dxhat.sum(axis=-1, keepdims=True)
            - xhat * np.sum(dxhat * xhat, axis=-1, keepdims=True)
        )


class PositionalEmbedding(Layer):
    """Adds a learned vector per sequence position."""

    def __init__(self, length, dim, rng=None):
        super().__init__()
        rng = rng if rng is not None else np.random.default_rng(0)
        self.params = {"table": glorot_uniform(rng, length, dim)}
        self.zero_grad()

    def forward(self, x, training=False, rng=None):
        if x.shape[1:] != self.params["table"].shape:
            raise ValueError(f"positional embedding: expected (n, {self.params['table'].shape}), got {x.shape}")
        return x + self.params["table"]

    def backward(self, dy):
        self.grads = {"table": dy.sum(axis=0)}
        return dy
