"""Run configuration: a flat JSON document validated against a schema, overridable by CLI flags."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import jsonschema

from .features.assemble import DEFAULT_GROUPS, FEATURE_GROUPS


@dataclass
class RunConfig:
    data_dir: str = "data"
    out_dir: str = "out"
    gender: str = "both"
    feature_groups: List[str] = field(default_factory=lambda: list(DEFAULT_GROUPS))
    model: str = "lstm"
    loss: str = "bce"
    holdout_season: int = 2024
    target_season: Optional[int] = None
    seed: int = 0
    train_source: str = "tourney"
    include_tourney_features: bool = False
    elo_k: float = 100.0
    elo_carry_over: bool = False
    ridge: float = 0.0
    learning_rate: Optional[float] = None  # None: architecture default
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    lr_plateau_patience: int = 5
    dropout: float = 0.5
    l2: float = 1e-4
    hidden_size: int = 32  # lstm
    n_heads: int = 2  # transformer
    ff_dim: int = 64  # transformer
    symmetric: bool = True
    clamp: bool = False
    n_bins: int = 10
    strict: bool = True

    def resolved_target_season(self):
        return self.target_season if self.target_season is not None else self.holdout_season + 1

    def hash(self):
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "data_dir": {"type": "string"},
        "out_dir": {"type": "string"},
        "gender": {"enum": ["men", "women", "both"]},
        "feature_groups": {"type": "array", "items": {"enum": sorted(FEATURE_GROUPS)}, "minItems": 1,
                           "uniqueItems": True},
        "model": {"enum": ["lstm", "transformer"]},
        "loss": {"enum": ["bce", "brier"]},
        "holdout_season": {"type": "integer"},
        "target_season": {"type": ["integer", "null"]},
        "seed": {"type": "integer"},
        "train_source": {"enum": ["tourney", "regular", "both"]},
        "include_tourney_features": {"type": "boolean"},
        "elo_k": {"type": "number", "exclusiveMinimum": 0},
        "elo_carry_over": {"type": "boolean"},
        "ridge": {"type": "number", "minimum": 0},
        "learning_rate": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "batch_size": {"type": "integer", "minimum": 1},
        "max_epochs": {"type": "integer", "minimum": 1},
        "patience": {"type": "integer", "minimum": 1},
        "lr_plateau_patience": {"type": "integer", "minimum": 1},
        "dropout": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "l2": {"type": "number", "minimum": 0},
        "hidden_size": {"type": "integer", "minimum": 1},
        "n_heads": {"type": "integer", "minimum": 1},
        "ff_dim": {"type": "integer", "minimum": 1},
        "symmetric": {"type": "boolean"},
        "clamp": {"type": "boolean"},
        "n_bins": {"type": "integer", "minimum": 1},
        "strict": {"type": "boolean"},
    },
}

assert set(SCHEMA["properties"]) == {f.name for f in fields(RunConfig)}


class ConfigError(ValueError):
    pass


def validate(doc):
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None


def load_config(path=None, overrides=None) -> RunConfig:
    doc = {}
    if path is not None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    doc.update({k: v for k, v in (overrides or {}).items() if v is not None})
    validate(doc)
    return RunConfig(**doc)
