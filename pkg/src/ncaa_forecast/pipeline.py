"""Glue from a competition data directory to feature tables and model-ready tensors."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .features.assemble import DEFAULT_GROUPS, FeatureTables, assemble_features, check_groups
from .features.box import compute_box_table
from .features.elo import EloConfig, compute_elo
from .features.quality import fit_glm_quality
from .ingest import GENDERS, GameRecord, IngestError, SeedEntry, parse_games, parse_seeds, parse_teams
from .prep import MatchRow, symmetrize

logger = logging.getLogger(__name__)

PREFIX = {"men": "M", "women": "W"}


def data_files(gender):
    p = PREFIX[gender]
    return {
        "regular": [f"{p}RegularSeasonDetailedResults.csv", f"{p}RegularSeasonCompactResults.csv"],
        "tourney": [f"{p}NCAATourneyDetailedResults.csv", f"{p}NCAATourneyCompactResults.csv"],
        "seeds": [f"{p}NCAATourneySeeds.csv"],
        "teams": [f"{p}Teams.csv"],
    }


def resolve_genders(selection) -> Tuple[str, ...]:
    if selection == "both":
        return GENDERS
    if selection in GENDERS:
        return (selection,)
    raise ValueError(f"gender must be one of men, women, both; got {selection!r}")


@dataclass
class Dataset:
    regular: List[GameRecord] = field(default_factory=list)
    tourney: List[GameRecord] = field(default_factory=list)
    seeds: List[SeedEntry] = field(default_factory=list)
    teams: Dict[str, Dict[int, str]] = field(default_factory=dict)

    @property
    def seasons(self):
        return sorted({g.season for g in self.regular} | {g.season for g in self.tourney})


def load_dataset(data_dir, genders: Sequence[str] = GENDERS, strict=True) -> Dataset:
    """Read every file the pipeline needs; missing files are reported together."""
    ds = Dataset()
    missing = []
    chosen = {}
    for gender in genders:
        for kind, candidates in data_files(gender).items():
            found = next((c for c in candidates if os.path.exists(os.path.join(data_dir, c))), None)
            if found is None:
                missing.append(" or ".join(candidates))
            chosen[(gender, kind)] = found
    if missing:
        raise IngestError("missing input files in {}: {}".format(data_dir, "; ".join(missing)))
    for gender in genders:
        path = lambda kind: os.path.join(data_dir, chosen[(gender, kind)])  # noqa: E731
        ds.regular += parse_games(path("regular"), gender, strict=strict)
        ds.tourney += parse_games(path("tourney"), gender, strict=strict)
        ds.seeds += parse_seeds(path("seeds"), gender)
        ds.teams[gender] = parse_teams(path("teams"))
    return ds


def _sorted_games(games: Iterable[GameRecord]):
    return sorted(games, key=lambda g: (g.gender, g.season, g.day_num))


def build_feature_tables(ds: Dataset, elo_cfg: EloConfig = EloConfig(), ridge=0.0,
                         include_tourney=False) -> FeatureTables:
    """Seeds, Elo, quality and box averages for every (gender, season) in ``ds``.

    Only regular-season games feed Elo, quality and box averages unless
    ``include_tourney`` is set, in which case tournament games of a season
    also shape that season's features (they then carry outcome information
    about the very games a model is evaluated on).
    """
    games = list(ds.regular)
    if include_tourney:
        games += ds.tourney
    games = _sorted_games(games)
    rows = symmetrize(games)
    winner_rows = rows[0::2]
    elo = compute_elo(winner_rows, elo_cfg)
    quality = fit_glm_quality(rows, ridge=ridge)
    box = compute_box_table(rows)
    return FeatureTables.from_seed_entries(ds.seeds, elo=elo, quality=quality, box=box)


@dataclass
class SampleSet:
    X: np.ndarray
    y: Optional[np.ndarray]
    seasons: np.ndarray
    genders: np.ndarray
    t1: np.ndarray
    t2: np.ndarray

    def __len__(self):
        return len(self.X)

    def subset(self, mask):
        return SampleSet(self.X[mask], None if self.y is None else self.y[mask],
                         self.seasons[mask], self.genders[mask], self.t1[mask], self.t2[mask])


def samples_from_rows(rows: Sequence[MatchRow], tables: FeatureTables,
                      groups: Sequence[str] = DEFAULT_GROUPS) -> SampleSet:
    check_groups(groups)
    if not rows:
        raise ValueError("no match rows to build samples from")
    samples = [assemble_features(r.t1, r.t2, r.gender, r.season, tables, groups, r.label) for r in rows]
    return SampleSet(
        X=np.stack([s.x for s in samples]),
        y=np.array([s.label for s in samples], dtype=np.int64),
        seasons=np.array([r.season for r in rows]),
        genders=np.array([r.gender for r in rows]),
        t1=np.array([r.t1 for r in rows]),
        t2=np.array([r.t2 for r in rows]),
    )


def training_rows(ds: Dataset, source="tourney") -> List[MatchRow]:
    """Symmetrized labelled rows used as model samples."""
    if source not in ("tourney", "regular", "both"):
        raise ValueError(f"unknown training source {source!r}")
    rows = []
    if source in ("regular", "both"):
        rows += symmetrize(_sorted_games(ds.regular), source="regular")
    if source in ("tourney", "both"):
        rows += symmetrize(_sorted_games(ds.tourney), source="tourney")
    return rows


def temporal_split(samples: SampleSet, holdout_season) -> Tuple[SampleSet, SampleSet]:
    """Train on seasons before ``holdout_season``, validate on that season only."""
    train = samples.subset(samples.seasons < holdout_season)
    val = samples.subset(samples.seasons == holdout_season)
    if len(train) == 0:
        raise ValueError(f"empty training split: no samples before season {holdout_season}")
    if len(val) == 0:
        raise ValueError(f"empty validation split: no samples in holdout season {holdout_season}")
    assert (train.seasons < holdout_season).all(), "training split leaks holdout-season data"
    return train, val


def matchup_samples(ids, tables: FeatureTables, groups: Sequence[str]) -> np.ndarray:
    """(n, 2, d) tensor with ``team_low`` in the team-1 row."""
    return np.stack([
        assemble_features(m.team_low, m.team_high, m.gender, m.season, tables, groups).x for m in ids
    ])
