import json

import numpy as np
import pytest

from ncaa_forecast.config import ConfigError, RunConfig, load_config
from ncaa_forecast.features.elo import EloConfig
from ncaa_forecast.ingest import IngestError
from ncaa_forecast.pipeline import (
    build_feature_tables,
    load_dataset,
    matchup_samples,
    resolve_genders,
    samples_from_rows,
    temporal_split,
    training_rows,
)
from ncaa_forecast.predict import enumerate_matchups
from ncaa_forecast.synthetic import generate_dataset


def test_config_defaults_and_overrides(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"model": "transformer", "seed": 4}))
    cfg = load_config(path, {"seed": 9, "loss": None})
    assert cfg.model == "transformer" and cfg.seed == 9 and cfg.loss == "bce"
    assert cfg.resolved_target_season() == 2025
    assert RunConfig().hash() == RunConfig().hash() != cfg.hash()


@pytest.mark.parametrize("doc,where", [({"model": "gru"}, "model"), ({"feature_groups": ["coach"]}, "feature_groups/0"),
                                        ({"dropout": 1.0}, "dropout"), ({"nope": 1}, "<root>")])
def test_config_schema_errors(tmp_path, doc, where):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError, match=f"at {where}"):
        load_config(path)


def test_config_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(path)


def test_resolve_genders():
    assert resolve_genders("both") == ("men", "women")
    assert resolve_genders("women") == ("women",)
    with pytest.raises(ValueError):
        resolve_genders("all")


def test_missing_files_listed_together(tmp_path):
    with pytest.raises(IngestError) as info:
        load_dataset(tmp_path, ["men"])
    msg = str(info.value)
    assert "MTeams.csv" in msg and "MNCAATourneySeeds.csv" in msg


def test_synthetic_dataset_shape(synthetic_dir):
    ds = load_dataset(synthetic_dir)
    assert ds.seasons == list(range(2019, 2026))
    assert len(ds.teams["men"]) == 24 and len(ds.teams["women"]) == 24
    assert len([s for s in ds.seeds if s.gender == "men" and s.season == 2024]) == 16
    assert len([g for g in ds.tourney if g.gender == "men" and g.season == 2024]) == 15


def test_synthetic_box_scores_add_up(tmp_path):
    generate_dataset(tmp_path, seasons=[2020], n_teams=16, games_per_team=6, genders=("men",))
    for g in load_dataset(tmp_path, ["men"]).regular:
        for stats, score in ((g.w_stats, g.w_score), (g.l_stats, g.l_score)):
            assert 2 * (stats.fgm - stats.fgm3) + 3 * stats.fgm3 + stats.ftm == score


def test_feature_tables_use_regular_season_only(synthetic_dir):
    ds = load_dataset(synthetic_dir)
    base = build_feature_tables(ds)
    with_tourney = build_feature_tables(ds, include_tourney=True)
    assert base.elo != with_tourney.elo
    regular_teams = {(g.gender, g.season, t) for g in ds.regular for t in (g.w_team, g.l_team)}
    assert set(base.elo) == regular_teams
    assert build_feature_tables(ds, EloConfig(k_factor=20)).elo != base.elo


def test_temporal_split_boundaries(synthetic_dir):
    ds = load_dataset(synthetic_dir)
    tables = build_feature_tables(ds)
    samples = samples_from_rows(training_rows(ds), tables)
    train, val = temporal_split(samples, 2024)
    assert train.seasons.max() < 2024 and set(val.seasons) == {2024}
    assert train.y.mean() == 0.5 and val.y.mean() == 0.5
    with pytest.raises(ValueError, match="before season 2019"):
        temporal_split(samples, 2019)
    with pytest.raises(ValueError, match="holdout season 2030"):
        temporal_split(samples, 2030)


def test_training_rows_sources(synthetic_dir):
    ds = load_dataset(synthetic_dir)
    assert len(training_rows(ds, "tourney")) == 2 * len(ds.tourney)
    assert len(training_rows(ds, "both")) == 2 * (len(ds.tourney) + len(ds.regular))
    with pytest.raises(ValueError):
        training_rows(ds, "playoffs")


def test_matchup_samples_orientation(synthetic_dir):
    ds = load_dataset(synthetic_dir)
    tables = build_feature_tables(ds)
    ids = enumerate_matchups(2024, {"men": sorted(ds.teams["men"])[:4]})
    X = matchup_samples(ids, tables, ["seed", "elo"])
    assert X.shape == (6, 2, 2)
    assert X[0, 0, 1] == tables.elo.get(("men", 2024, ids[0].team_low), 1000.0)


@pytest.mark.parametrize("n", [3, 1, 128, 40])
def test_synthetic_rejects_bad_field_sizes(tmp_path, n):
    with pytest.raises(ValueError, match="power of two"):
        generate_dataset(tmp_path, n_teams=200, n_tourney=n)


def test_synthetic_small_field(tmp_path):
    generate_dataset(tmp_path, seasons=[2020], n_teams=8, games_per_team=4, n_tourney=8, genders=("men",))
    ds = load_dataset(tmp_path, ["men"])
    assert sorted(s.seed_num for s in ds.seeds) == list(range(1, 9))
    assert len(ds.tourney) == 7
