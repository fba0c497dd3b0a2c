import csv
import filecmp
import json
import shutil
from math import comb

import numpy as np
import pytest

from ncaa_forecast.cli import main
from ncaa_forecast.evaluation import accuracy, auc, brier, ece
from ncaa_forecast.features import FeatureTables
from ncaa_forecast.models import ModelCheckpoint, symmetric_predict
from ncaa_forecast.pipeline import load_dataset


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, synthetic_dir):
    out = tmp_path_factory.mktemp("cli") / "out"
    base = ["--data-dir", str(synthetic_dir), "--out-dir", str(out), "--max-epochs", "4"]
    assert main(["features"] + base) == 0
    assert main(["train"] + base) == 0
    return out, base


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_features_outputs_and_idempotence(workspace):
    out, base = workspace
    first = (out / "features.csv").read_bytes()
    assert main(["features"] + base) == 0
    manifest = json.loads((out / "manifest_features.json").read_text())
    assert manifest["cache_rebuilt"] is False
    assert (out / "features.csv").read_bytes() == first
    (out / "features.csv").unlink()
    assert main(["features"] + base) == 0
    assert (out / "features.csv").read_bytes() == first
    assert json.loads((out / "manifest_features.json").read_text())["cache_rebuilt"] is True
    summary = read_rows(out / "feature_summary.csv")
    assert list(summary[0]) == ["feature", "count", "mean", "std", "min", "25%", "50%", "75%", "max"]
    assert {"elo", "quality", "seed"} <= {r["feature"] for r in summary}


def test_train_outputs(workspace):
    out, _ = workspace
    d = out / "models" / "lstm_bce"
    hist = read_rows(d / "history.csv")
    assert list(hist[0]) == ["epoch", "train_loss", "val_loss", "val_acc", "lr"]
    assert len(hist) == 4
    ckpt = ModelCheckpoint.load(d / "checkpoint.json")
    assert ckpt.feature_groups == ["seed", "elo", "quality", "gender"]
    assert ckpt.feature_names == ["seed", "elo", "quality", "men_women"]
    manifest = json.loads((out / "manifest_train.json").read_text())
    assert len(manifest["config_hash"]) == 64 and manifest["seed"] == 0
    assert "models/lstm_bce/checkpoint.json" in manifest["outputs"]


def test_retrain_is_byte_identical(workspace, tmp_path):
    out, base = workspace
    d = out / "models" / "lstm_bce"
    shutil.copy(d / "history.csv", tmp_path / "h.csv")
    shutil.copy(d / "checkpoint.json", tmp_path / "c.json")
    assert main(["train"] + base) == 0
    assert filecmp.cmp(d / "history.csv", tmp_path / "h.csv", shallow=False)
    assert filecmp.cmp(d / "checkpoint.json", tmp_path / "c.json", shallow=False)


def test_evaluate_matches_library(workspace, synthetic_dir):
    out, base = workspace
    assert main(["evaluate"] + base) == 0
    d = out / "models" / "lstm_bce"
    report = json.loads((d / "report.json").read_text())
    assert {"n", "accuracy", "auc", "brier", "ece"} <= set(report)
    # recompute from scratch on the same arrays
    from ncaa_forecast.pipeline import samples_from_rows, temporal_split, training_rows

    ds = load_dataset(synthetic_dir)
    tables = FeatureTables.read_csv(out / "features.csv")
    _, val = temporal_split(samples_from_rows(training_rows(ds), tables), 2024)
    p = symmetric_predict(ModelCheckpoint.load(d / "checkpoint.json"), val.X)
    assert report["n"] == len(val)
    assert report["accuracy"] == accuracy(p, val.y)
    assert report["auc"] == auc(p, val.y)
    assert report["brier"] == brier(p, val.y)
    assert report["ece"] == ece(p, val.y)
    assert len(read_rows(d / "reliability.csv")) == 10


def test_predict_writes_all_pairs(workspace, synthetic_dir):
    out, base = workspace
    assert main(["predict"] + base + ["--target-season", "2025", "--diagnostics"]) == 0
    ds = load_dataset(synthetic_dir)
    rows = read_rows(out / "submission.csv")
    assert len(rows) == sum(comb(len(t), 2) for t in ds.teams.values())
    ids = [r["ID"] for r in rows]
    assert ids == sorted(ids, key=lambda s: tuple(int(v) for v in s.split("_")))
    assert all(len(r["Pred"].split(".")[1]) == 6 for r in rows)
    hist = read_rows(out / "prediction_hist.csv")
    assert sum(int(h["count"]) for h in hist) == len(rows)
    diag = read_rows(out / "submission_features.csv")
    assert len(diag) == len(rows) and "t1_elo" in diag[0]


def test_predict_seeded_teams_only(workspace):
    out, base = workspace
    assert main(["predict"] + base + ["--target-season", "2024", "--eligible", "seeds", "--gender", "men"]) == 0
    assert len(read_rows(out / "submission.csv")) == comb(16, 2)


def test_ablate_schema(workspace):
    out, base = workspace
    assert main(["ablate"] + base + ["--remove", "seed,elo"]) == 0
    rows = read_rows(out / "ablation.csv")
    assert [r["removed"] for r in rows] == ["none", "seed", "elo"]
    assert float(rows[0]["auc_delta"]) == 0.0


def test_sweep_four_variants(workspace, tmp_path):
    out, base = workspace
    sweep = tmp_path / "grid.json"
    sweep.write_text(json.dumps({"model": ["lstm", "transformer"], "loss": ["bce", "brier"]}))
    assert main(["sweep"] + base[:-2] + ["--max-epochs", "2", "--sweep", str(sweep)]) == 0
    ckpts = sorted(p.parent.name for p in (out / "sweep").glob("*/checkpoint.json"))
    assert ckpts == ["loss-bce_model-lstm", "loss-bce_model-transformer",
                     "loss-brier_model-lstm", "loss-brier_model-transformer"]
    assert len(read_rows(out / "sweep_results.csv")) == 4


def test_error_exit_codes(workspace, tmp_path, capsys):
    out, base = workspace
    assert main(["train", "--data-dir", str(tmp_path), "--out-dir", str(tmp_path / "o")]) == 3
    assert "feature cache" in capsys.readouterr().err
    assert main(["features", "--data-dir", str(tmp_path), "--out-dir", str(tmp_path / "o")]) == 3
    assert "MTeams.csv" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text('{"model": "gru"}')
    assert main(["train", "--config", str(bad)]) == 2
    assert main(["train"] + base + ["--holdout-season", "1990"]) == 3
    assert main(["evaluate"] + base + ["--checkpoint", str(tmp_path / "none.json")]) == 3


def test_dimension_mismatch_is_input_error(workspace, tmp_path, capsys):
    out, base = workspace
    ckpt = ModelCheckpoint.load(out / "models" / "lstm_bce" / "checkpoint.json")
    ckpt.feature_groups = ["seed", "elo", "quality", "gender", "box"]
    ckpt.save(tmp_path / "c.json")
    assert main(["evaluate"] + base + ["--checkpoint", str(tmp_path / "c.json")]) == 4
    assert "expects 4 features per team, data has 17" in capsys.readouterr().err


def test_box_group_end_to_end(workspace, tmp_path):
    out, base = workspace
    groups = ["--feature-groups", "seed,elo,quality,gender,box", "--model", "transformer"]
    assert main(["train"] + base + groups) == 0
    ckpt = ModelCheckpoint.load(out / "models" / "transformer_bce" / "checkpoint.json")
    assert ckpt.input_dim == 17
    assert main(["evaluate"] + base + groups) == 0


def test_shipped_sweep_files_validate():
    from pathlib import Path

    from ncaa_forecast.cli import sweep_cells
    from ncaa_forecast.config import RunConfig, load_config

    root = Path(__file__).resolve().parent.parent / "configs"
    for path in sorted(root.glob("sweep_*.json")):
        grid = json.loads(path.read_text())
        cells = list(sweep_cells(grid))
        assert len(cells) == int(np.prod([len(v) for v in grid.values()]))
        for cell in cells:
            load_config(None, cell)
    assert isinstance(load_config(root / "run_default.json"), RunConfig)


def test_sweep_rejects_unknown_axis(workspace, tmp_path):
    out, base = workspace
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"momentum": [0.9]}))
    assert main(["sweep"] + base + ["--sweep", str(grid)]) == 2
    grid.write_text(json.dumps({"model": []}))
    assert main(["sweep"] + base + ["--sweep", str(grid)]) == 2
