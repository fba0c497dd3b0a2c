"""Command-line front end: features, train, evaluate, ablate, predict, sweep."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from dataclasses import asdict, replace

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .evaluation.ablation import run_ablation, write_ablation_csv
from .evaluation.metrics import evaluate, write_reliability_csv
from .features.assemble import FeatureTables, feature_names
from .features.elo import EloConfig
from .ingest import IngestError
from .models.checkpoint import ModelCheckpoint, symmetric_predict, predict_proba
from .models.estimators import make_forecaster
from .models.training import TrainingError
from .pipeline import (
    build_feature_tables,
    load_dataset,
    matchup_samples,
    resolve_genders,
    samples_from_rows,
    temporal_split,
    training_rows,
)
from .predict import enumerate_matchups, prediction_histogram, write_histogram_csv, write_submission

logger = logging.getLogger("ncaa_forecast")

FEATURE_CACHE = "features.csv"
DEFAULT_LR = {"lstm": 1e-3, "transformer": 1e-4}


class DataError(RuntimeError):
    pass


def _out(cfg, *parts):
    path = os.path.join(cfg.out_dir, *parts)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    return path


def write_manifest(cfg: RunConfig, command, outputs, extra=None):
    doc = {"command": command, "config": asdict(cfg), "config_hash": cfg.hash(), "seed": cfg.seed,
           "outputs": sorted(os.path.relpath(p, cfg.out_dir) for p in outputs)}
    if extra:
        doc.update(extra)
    path = _out(cfg, f"manifest_{command}.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def model_dir(cfg):
    return os.path.join(cfg.out_dir, "models", f"{cfg.model}_{cfg.loss}")


# -- features --------------------------------------------------------------

def get_tables(cfg: RunConfig, rebuild=False, ds=None):
    cache = os.path.join(cfg.out_dir, FEATURE_CACHE)
    if os.path.exists(cache) and not rebuild:
        logger.info("loading feature cache %s", cache)
        return FeatureTables.read_csv(cache), False
    ds = ds or load_dataset(cfg.data_dir, resolve_genders(cfg.gender), strict=cfg.strict)
    tables = build_feature_tables(ds, EloConfig(k_factor=cfg.elo_k, carry_over=cfg.elo_carry_over),
                                  ridge=cfg.ridge, include_tourney=cfg.include_tourney_features)
    tables.write_csv(_out(cfg, FEATURE_CACHE))
    return tables, True


def cmd_features(cfg: RunConfig, rebuild=False):
    tables, built = get_tables(cfg, rebuild)
    summary = tables.summary()
    spath = _out(cfg, "feature_summary.csv")
    cols = ["feature", "count", "mean", "std", "min", "25%", "50%", "75%", "max"]
    with open(spath, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in summary:
            fh.write(",".join(str(row[c]) if c in ("feature", "count") else repr(row[c]) for c in cols) + "\n")
    print(f"{'feature':<16}{'count':>8}{'mean':>10}{'std':>10}{'min':>10}{'max':>10}")
    for row in summary:
        print(f"{row['feature']:<16}{row['count']:>8}{row['mean']:>10.3f}{row['std']:>10.3f}"
              f"{row['min']:>10.3f}{row['max']:>10.3f}")
    outputs = [os.path.join(cfg.out_dir, FEATURE_CACHE), spath]
    write_manifest(cfg, "features", outputs, {"cache_rebuilt": built})
    return tables


# -- train / evaluate -------------------------------------------------------

def _require_cache(cfg):
    if not os.path.exists(os.path.join(cfg.out_dir, FEATURE_CACHE)):
        raise DataError(f"feature cache {os.path.join(cfg.out_dir, FEATURE_CACHE)} not found; run `features` first")
    return FeatureTables.read_csv(os.path.join(cfg.out_dir, FEATURE_CACHE))


def labelled_split(cfg, groups, tables, ds=None):
    ds = ds or load_dataset(cfg.data_dir, resolve_genders(cfg.gender), strict=cfg.strict)
    if cfg.holdout_season not in ds.seasons:
        raise DataError(f"holdout season {cfg.holdout_season} not present in data (seasons {ds.seasons[0]}-{ds.seasons[-1]})")
    rows = [r for r in training_rows(ds, cfg.train_source) if r.season <= cfg.holdout_season]
    samples = samples_from_rows(rows, tables, groups)
    return temporal_split(samples, cfg.holdout_season)


def make_estimator(cfg: RunConfig):
    lr = cfg.learning_rate if cfg.learning_rate is not None else DEFAULT_LR[cfg.model]
    arch = {"hidden_size": cfg.hidden_size} if cfg.model == "lstm" else {"n_heads": cfg.n_heads, "ff_dim": cfg.ff_dim}
    return make_forecaster(
        cfg.model, loss=cfg.loss, learning_rate=lr, batch_size=cfg.batch_size,
        max_epochs=cfg.max_epochs, patience=cfg.patience, lr_plateau_patience=cfg.lr_plateau_patience,
        dropout=cfg.dropout, l2=cfg.l2, symmetric=cfg.symmetric, random_state=cfg.seed, **arch,
    )


def cmd_train(cfg: RunConfig, out_dir=None):
    tables = _require_cache(cfg)
    groups = list(cfg.feature_groups)
    train_set, val_set = labelled_split(cfg, groups, tables)
    est = make_estimator(cfg)
    est.fit(train_set.X, train_set.y, val_set.X, val_set.y)
    est.checkpoint_.feature_names = feature_names(groups)
    est.checkpoint_.feature_groups = groups
    out_dir = out_dir or model_dir(cfg)
    os.makedirs(out_dir, exist_ok=True)
    ckpt_path = os.path.join(out_dir, "checkpoint.json")
    hist_path = os.path.join(out_dir, "history.csv")
    est.save(ckpt_path)
    est.history_.write_csv(hist_path)
    h = est.history_
    print(f"{cfg.model}/{cfg.loss}: {len(h.epochs)} epochs ({h.stop_reason}), best epoch {h.best_epoch}, "
          f"val loss {h.epochs[h.best_epoch - 1]['val_loss']:.4f}")
    write_manifest(cfg, "train", [ckpt_path, hist_path],
                   {"n_train": len(train_set), "n_val": len(val_set)})
    return est, ckpt_path


def _load_checkpoint(path):
    if not os.path.exists(path):
        raise DataError(f"checkpoint {path} not found; run `train` first")
    return ModelCheckpoint.load(path)


def _predict(cfg, ckpt, X):
    return symmetric_predict(ckpt, X) if cfg.symmetric else predict_proba(ckpt, X)


def cmd_evaluate(cfg: RunConfig, checkpoint=None, out_dir=None):
    checkpoint = checkpoint or os.path.join(model_dir(cfg), "checkpoint.json")
    ckpt = _load_checkpoint(checkpoint)
    groups = ckpt.feature_groups or list(cfg.feature_groups)
    tables = _require_cache(cfg)
    _, val_set = labelled_split(cfg, groups, tables)
    if val_set.X.shape[2] != ckpt.input_dim:
        raise ValueError(f"checkpoint expects {ckpt.input_dim} features per team, data has {val_set.X.shape[2]}")
    p = _predict(cfg, ckpt, val_set.X)
    report = evaluate(p, val_set.y, cfg.n_bins)
    out_dir = out_dir or os.path.dirname(checkpoint)
    os.makedirs(out_dir, exist_ok=True)
    paths = [os.path.join(out_dir, n) for n in ("report.json", "report.csv", "reliability.csv")]
    report.to_json(paths[0])
    report.to_csv(paths[1])
    write_reliability_csv(report.bins, paths[2])
    print(" ".join(f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}" for k, v in report.metrics().items()))
    write_manifest(cfg, "evaluate", paths, {"checkpoint": checkpoint})
    return report


# -- ablate / predict / sweep -------------------------------------------------

def cmd_ablate(cfg: RunConfig, remove=None):
    tables = _require_cache(cfg)
    groups = list(cfg.feature_groups)
    train_set, val_set = labelled_split(cfg, groups, tables)
    # symmetric averaging is a prediction-time option; ablation scores raw model output
    est = make_estimator(replace(cfg, symmetric=False))
    results = run_ablation(est, train_set.X, train_set.y, val_set.X, val_set.y, groups, remove)
    path = _out(cfg, "ablation.csv")
    write_ablation_csv(results, path)
    for r in results:
        print(f"{r.removed:<10} auc={r.auc:.4f} ({r.auc_delta:+.4f}) brier={r.brier:.4f} ({r.brier_delta:+.4f})")
    write_manifest(cfg, "ablate", [path])
    return results


def cmd_predict(cfg: RunConfig, checkpoint=None, eligible="teams", diagnostics=False):
    checkpoint = checkpoint or os.path.join(model_dir(cfg), "checkpoint.json")
    ckpt = _load_checkpoint(checkpoint)
    groups = ckpt.feature_groups or list(cfg.feature_groups)
    tables = _require_cache(cfg)
    season = cfg.resolved_target_season()
    ds = load_dataset(cfg.data_dir, resolve_genders(cfg.gender), strict=cfg.strict)
    teams = {}
    for gender in resolve_genders(cfg.gender):
        if eligible == "teams":
            teams[gender] = sorted(ds.teams[gender])
        elif eligible == "seeds":
            teams[gender] = sorted({e.team for e in ds.seeds if e.gender == gender and e.season == season})
        else:
            raise ValueError(f"unknown eligibility rule {eligible!r}")
    ids = enumerate_matchups(season, teams)
    if not ids:
        raise DataError(f"no eligible matchups for season {season}")
    X = matchup_samples(ids, tables, groups)
    if X.shape[2] != ckpt.input_dim:
        raise ValueError(f"checkpoint expects {ckpt.input_dim} features per team, data has {X.shape[2]}")
    probs = _predict(cfg, ckpt, X)
    sub = _out(cfg, "submission.csv")
    write_submission(ids, probs, sub, clamp=cfg.clamp)
    hist = _out(cfg, "prediction_hist.csv")
    write_histogram_csv(prediction_histogram(probs), hist)
    outputs = [sub, hist]
    if diagnostics:
        diag = _out(cfg, "submission_features.csv")
        names = feature_names(groups)
        with open(diag, "w") as fh:
            fh.write(",".join(["ID", "Pred"] + [f"t1_{n}" for n in names] + [f"t2_{n}" for n in names]) + "\n")
            for mid, p, x in zip(ids, probs, X):
                fh.write(",".join([str(mid), f"{p:.6f}"] + [repr(float(v)) for v in x.reshape(-1)]) + "\n")
        outputs.append(diag)
    print(f"wrote {len(ids)} predictions for season {season} to {sub}")
    write_manifest(cfg, "predict", outputs, {"checkpoint": checkpoint, "n_rows": len(ids)})
    return ids, probs


DEFAULT_SWEEP = {"model": ["lstm", "transformer"], "loss": ["bce", "brier"]}


def sweep_cells(grid):
    keys = sorted(grid)
    for values in itertools.product(*(grid[k] for k in keys)):
        yield dict(zip(keys, values))


def cmd_sweep(cfg: RunConfig, sweep_path=None):
    grid = DEFAULT_SWEEP
    if sweep_path:
        with open(sweep_path) as fh:
            grid = json.load(fh)
        if not isinstance(grid, dict) or not all(isinstance(v, list) and v for v in grid.values()):
            raise ConfigError("sweep file must map config keys to non-empty lists")
    rows = []
    for cell in sweep_cells(grid):
        overrides = {k: v for k, v in asdict(cfg).items()}
        overrides.update(cell)
        cell_cfg = load_config(None, overrides)
        name = "_".join(f"{k}-{v}" for k, v in cell.items())
        out_dir = os.path.join(cfg.out_dir, "sweep", name)
        est, ckpt_path = cmd_train(cell_cfg, out_dir)
        report = cmd_evaluate(cell_cfg, ckpt_path, out_dir)
        rows.append((name, report))
    path = _out(cfg, "sweep_results.csv")
    with open(path, "w") as fh:
        fh.write("cell,n,accuracy,auc,brier,ece\n")
        for name, r in rows:
            fh.write(f"{name},{r.n},{r.accuracy!r},{r.auc!r},{r.brier!r},{r.ece!r}\n")
    write_manifest(cfg, "sweep", [path], {"grid": grid})
    return rows


# -- entry point ------------------------------------------------------------------

EXIT_CODES = {"config": 2, "data": 3, "input": 4, "training": 5}


def error_category(exc):
    if isinstance(exc, ConfigError):
        return "config"
    if isinstance(exc, (IngestError, DataError, FileNotFoundError)):
        return "data"
    if isinstance(exc, (TrainingError, FloatingPointError)):
        return "training"
    if isinstance(exc, (ValueError, KeyError)):
        return "input"
    return None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON run config")
    common.add_argument("--data-dir")
    common.add_argument("--out-dir")
    common.add_argument("--gender", choices=["men", "women", "both"])
    common.add_argument("--model", choices=["lstm", "transformer"])
    common.add_argument("--loss", choices=["bce", "brier"])
    common.add_argument("--seed", type=int)
    common.add_argument("--holdout-season", type=int)
    common.add_argument("--target-season", type=int)
    common.add_argument("--feature-groups", help="comma-separated, e.g. seed,elo,quality,gender")
    common.add_argument("--max-epochs", type=int)
    common.add_argument("--learning-rate", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ncaa-forecast", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    f = sub.add_parser("features", parents=[common], help="build or load the feature cache")
    f.add_argument("--rebuild", action="store_true")
    sub.add_parser("train", parents=[common], help="train one model/loss variant")
    e = sub.add_parser("evaluate", parents=[common], help="metrics on the holdout season")
    e.add_argument("--checkpoint")
    a = sub.add_parser("ablate", parents=[common], help="retrain without each feature group")
    a.add_argument("--remove", help="comma-separated groups to remove (default: every group)")
    pr = sub.add_parser("predict", parents=[common], help="write the all-pairs submission")
    pr.add_argument("--checkpoint")
    pr.add_argument("--eligible", choices=["teams", "seeds"], default="teams")
    pr.add_argument("--diagnostics", action="store_true")
    sw = sub.add_parser("sweep", parents=[common], help="train and evaluate every grid cell")
    sw.add_argument("--sweep", help="JSON mapping config keys to lists of values")
    return p


def config_from_args(args) -> RunConfig:
    overrides = {
        "data_dir": args.data_dir, "out_dir": args.out_dir, "gender": args.gender,
        "model": args.model, "loss": args.loss, "seed": args.seed,
        "holdout_season": args.holdout_season, "target_season": args.target_season,
        "max_epochs": args.max_epochs, "learning_rate": args.learning_rate,
    }
    if args.feature_groups:
        overrides["feature_groups"] = [g.strip() for g in args.feature_groups.split(",") if g.strip()]
    return load_config(args.config, overrides)


def run(args):
    cfg = config_from_args(args)
    logger.info("config hash %s seed %d", cfg.hash(), cfg.seed)
    if args.command == "features":
        cmd_features(cfg, rebuild=args.rebuild)
    elif args.command == "train":
        cmd_train(cfg)
    elif args.command == "evaluate":
        cmd_evaluate(cfg, args.checkpoint)
    elif args.command == "ablate":
        remove = [g.strip() for g in args.remove.split(",")] if args.remove else None
        cmd_ablate(cfg, remove)
    elif args.command == "predict":
        cmd_predict(cfg, args.checkpoint, args.eligible, args.diagnostics)
    elif args.command == "sweep":
        cmd_sweep(cfg, args.sweep)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        run(args)
    except Exception as exc:  # noqa: BLE001 - mapped to a category or re-raised
        category = error_category(exc)
        if category is None:
            raise
        print(f"error [{category}]: {exc}", file=sys.stderr)
        return EXIT_CODES[category]
    return 0

if __name__ == "__main__":
    sys.exit(main())
