"""The two forecaster architectures, wired from the nn layers."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..nn.layers import (
    LSTM,
    Dense,
    Dropout,
    Flatten,
    LayerNorm,
    MultiHeadAttention,
    PositionalEmbedding,
    ReLU,
    Sigmoid,
    check_finite,
)

SEQ_LEN = 2


@dataclass(frozen=True)
class LstmConfig:
    input_dim: int
    hidden: int = 32
    dense: int = 16
    dropout: float = 0.5
    l2: float = 1e-4

    def validate(self):
        if min(self.input_dim, self.hidden, self.dense) <= 0:
            raise ValueError(f"layer sizes must be positive: {self}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


@dataclass(frozen=True)
class TransformerConfig:
    input_dim: int
    d_model: int = 64
    heads: int = 2
    ff_dim: int = 64
    head_units: Tuple[int, ...] = (64, 16)
    dropout: float = 0.5
    positional: bool = True
    l2: float = 1e-4

    def validate(self):
        if min(self.input_dim, self.d_model, self.heads, self.ff_dim, *self.head_units) <= 0:
            raise ValueError(f"layer sizes must be positive: {self}")
        if self.d_model % self.heads:
            raise ValueError(f"d_model {self.d_model} not divisible by heads {self.heads}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


class Network:
    """Named layers plus flat views of their parameters and gradients."""

    arch = ""

    def __init__(self, config, layers: List[Tuple[str, object]]):
        self.config = config
        self.layers = dict(layers)

    @property
    def params(self) -> Dict[str, np.ndarray]:
        return {f"{ln}.{pn}": p for ln, layer in self.layers.items() for pn, p in layer.params.items()}

    @property
    def grads(self) -> Dict[str, np.ndarray]:
        return {f"{ln}.{pn}": g for ln, layer in self.layers.items() for pn, g in layer.grads.items()}

    def l2_map(self):
        lam = self.config.l2
        return {f"{ln}.{pn}": lam for ln, layer in self.layers.items() for pn in layer.decay}

    @property
    def n_params(self):
        return sum(p.size for p in self.params.values())

    def load_params(self, values: Dict[str, np.ndarray]):
        params = self.params
        missing = set(params) - set(values)
        if missing:
            raise ValueError(f"missing parameters: {sorted(missing)}")
        for name, arr in values.items():
            if name not in params:
                raise ValueError(f"unknown parameter {name}")
            if params[name].shape != arr.shape:
                raise ValueError(f"parameter {name}: shape {arr.shape} != {params[name].shape}")
            np.copyto(params[name], arr)

    def snapshot(self):
        return {k: v.copy() for k, v in self.params.items()}

    def _check_input(self, x):
        if x.ndim != 3 or x.shape[1] != SEQ_LEN or x.shape[2] != self.config.input_dim:
            raise ValueError(f"expected input (n, {SEQ_LEN}, {self.config.input_dim}), got {x.shape}")


class LstmNetwork(Network):
    arch = "lstm"

    def __init__(self, cfg: LstmConfig, seed=0):
        cfg.validate()
        rng = np.random.default_rng(seed)
        super().__init__(cfg, [
            ("lstm", LSTM(cfg.input_dim, cfg.hidden, rng)),
            ("drop1", Dropout(cfg.dropout)),
            ("dense", Dense(cfg.hidden, cfg.dense, rng)),
            ("relu", ReLU()),
            ("drop2", Dropout(cfg.dropout)),
            ("out", Dense(cfg.dense, 1, rng)),
            ("sigmoid", Sigmoid()),
        ])
        self._order = list(self.layers)

    def forward(self, x, training=False, rng=None):
        self._check_input(x)
        h = x
        for name in self._order:
            h = check_finite(self.layers[name].forward(h, training, rng), name)
        return h[:, 0]

    def backward(self, dp):
        d = dp.reshape(-1, 1)
        for name in reversed(self._order):
            d = self.layers[name].backward(d)
        return d


class TransformerNetwork(Network):
    arch = "transformer"

    def __init__(self, cfg: TransformerConfig, seed=0):
        cfg.validate()
        rng = np.random.default_rng(seed)
        m = cfg.d_model
        layers = [("proj", Dense(cfg.input_dim, m, rng))]
        if cfg.positional:
            layers.append(("pos", PositionalEmbedding(SEQ_LEN, m, rng)))
        layers += [
            ("attn", MultiHeadAttention(m, cfg.heads, rng)),
            ("norm1", LayerNorm(m)),
            ("ff1", Dense(m, cfg.ff_dim, rng)),
            ("ff_relu", ReLU()),
            ("ff2", Dense(cfg.ff_dim, m, rng)),
            ("norm2", LayerNorm(m)),
            ("flatten", Flatten()),
        ]
        width = SEQ_LEN * m
        self._head = []
        for i, units in enumerate(cfg.head_units):
            names = (f"head{i}", f"head{i}_relu", f"head{i}_drop")
            layers += [(names[0], Dense(width, units, rng)), (names[1], ReLU()), (names[2], Dropout(cfg.dropout))]
            self._head.extend(names)
            width = units
        layers += [("out", Dense(width, 1, rng)), ("sigmoid", Sigmoid())]
        self._head += ["out", "sigmoid"]
        super().__init__(cfg, layers)

    def forward(self, x, training=False, rng=None):
        self._check_input(x)
        L = self.layers
        h = L["proj"].forward(x)
        if "pos" in L:
            h = L["pos"].forward(h)
        a = L["attn"].forward(h)
        h1 = L["norm1"].forward(h + a)
        f = L["ff2"].forward(L["ff_relu"].forward(L["ff1"].forward(h1)))
        h2 = L["norm2"].forward(h1 + f)
        z = L["flatten"].forward(check_finite(h2, "encoder"))
        for name in self._head:
            z = check_finite(L[name].forward(z, training, rng), name)
        return z[:, 0]

    def backward(self, dp):
        L = self.layers
        d = dp.reshape(-1, 1)
        for name in reversed(self._head):
            d = L[name].backward(d)
        d = L["flatten"].backward(d)
        d_res2 = L["norm2"].backward(d)
        d_h1 = d_res2 + L["ff1"].backward(L["ff_relu"].backward(L["ff2"].backward(d_res2)))
        d_res1 = L["norm1"].backward(d_h1)
        d_h = d_res1 + L["attn"].backward(d_res1)
        if "pos" in L:
            d_h = L["pos"].backward(d_h)
        return L["proj"].backward(d_h)


def build_lstm(cfg: LstmConfig, seed=0) -> LstmNetwork:
    return LstmNetwork(cfg, seed)


def build_transformer(cfg: TransformerConfig, seed=0) -> TransformerNetwork:
    return TransformerNetwork(cfg, seed)


def build_network(arch, config: dict, seed=0):
    if arch == "lstm":
        return build_lstm(LstmConfig(**config), seed)
    if arch == "transformer":
        config = dict(config)
        config["head_units"] = tuple(config.get("head_units", (64, 16)))
        return build_transformer(TransformerConfig(**config), seed)
    raise ValueError(f"unknown architecture {arch!r}")


def config_dict(cfg):
    d = asdict(cfg)
    if "head_units" in d:
        d["head_units"] = list(d["head_units"])
    return d
