"""Per-team feature tables and 2 x d matchup samples."""

from __future__ import annotations

import csv
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..ingest import BOX_FIELDS, SeedEntry
from .box import BoxAverages

FEATURE_GROUPS: Dict[str, Tuple[str, ...]] = {
    "seed": ("seed",),
    "elo": ("elo",),
    "quality": ("quality",),
    "gender": ("men_women",),
    "box": tuple("box_" + f for f in BOX_FIELDS),
}
# complexity tiers used when reporting ablations
GROUP_TIER = {"seed": "easy", "gender": "easy", "box": "medium", "elo": "hard", "quality": "hard"}
DEFAULT_GROUPS = ("seed", "elo", "quality", "gender")

BASE_ELO = 1000.0
NEUTRAL_QUALITY = 0.0
NEUTRAL_SEED = 8.5  # median of 1..16, used only when a gender has no seeds at all


def seed_diff(seed_t1, seed_t2):
    """Positive when team 1 holds the better (numerically lower) seed."""
    return seed_t2 - seed_t1


def check_groups(groups: Sequence[str]):
    unknown = [g for g in groups if g not in FEATURE_GROUPS]
    if unknown:
        raise ValueError(f"unknown feature group(s) {unknown}; known: {sorted(FEATURE_GROUPS)}")
    if len(set(groups)) != len(groups):
        raise ValueError(f"duplicate feature group in {list(groups)}")
    if not groups:
        raise ValueError("at least one feature group is required")


def feature_names(groups: Sequence[str]) -> List[str]:
    check_groups(groups)
    return [name for g in groups for name in FEATURE_GROUPS[g]]


def group_columns(groups: Sequence[str]) -> Dict[str, List[int]]:
    """Column indices occupied by each group in the per-team row."""
    out, start = {}, 0
    for g in groups:
        width = len(FEATURE_GROUPS[g])
        out[g] = list(range(start, start + width))
        start += width
    return out


@dataclass
class MatchupSample:
    x: np.ndarray  # (2, d): row 0 team 1, row 1 team 2
    label: Optional[int]
    season: int
    gender: str
    t1: int
    t2: int


@dataclass
class FeatureTables:
    """Lookup tables keyed by (gender, season, team)."""

    seeds: Dict[Tuple[str, int, int], int] = field(default_factory=dict)
    elo: Dict[Tuple[str, int, int], float] = field(default_factory=dict)
    quality: Dict[Tuple[str, int, int], float] = field(default_factory=dict)
    box: Dict[Tuple[str, int, int], BoxAverages] = field(default_factory=dict)

    def __post_init__(self):
        self._median_cache = {}
        self._box_mean_cache = {}

    @classmethod
    def from_seed_entries(cls, entries: Sequence[SeedEntry], **kwargs):
        seeds = {(e.gender, e.season, e.team): e.seed_num for e in entries}
        return cls(seeds=seeds, **kwargs)

    def median_seed(self, gender, season):
        key = (gender, season)
        if key not in self._median_cache:
            vals = [v for (g, s, _), v in self.seeds.items() if g == gender and s == season]
            if not vals:
                vals = [v for (g, _, _), v in self.seeds.items() if g == gender]
            self._median_cache[key] = float(statistics.median(vals)) if vals else NEUTRAL_SEED
        return self._median_cache[key]

    def _box_season_mean(self, gender, season):
        key = (gender, season)
        if key not in self._box_mean_cache:
            vals = [a.stats for (g, s, _), a in self.box.items()
                    if g == gender and s == season and a.stats is not None]
            if not vals:
                raise ValueError(f"no box-score averages for {gender} {season}; detailed results required")
            self._box_mean_cache[key] = tuple(np.mean(np.asarray(vals), axis=0))
        return self._box_mean_cache[key]

    def team_row(self, gender, season, team, groups: Sequence[str]) -> List[float]:
        key = (gender, season, team)
        row: List[float] = []
        for g in groups:
            if g == "seed":
                s = self.seeds.get(key)
                row.append(float(s) if s is not None else self.median_seed(gender, season))
            elif g == "elo":
                row.append(self.elo.get(key, BASE_ELO))
            elif g == "quality":
                row.append(self.quality.get(key, NEUTRAL_QUALITY))
            elif g == "gender":
                row.append(1.0 if gender == "men" else 0.0)
            elif g == "box":
                avg = self.box.get(key)
                stats = avg.stats if avg is not None and avg.stats is not None else self._box_season_mean(gender, season)
                row.extend(float(v) for v in stats)
            else:
                raise ValueError(f"unknown feature group {g!r}")
        return row

    # -- CSV cache ---------------------------------------------------------

    def to_long_rows(self):
        rows = []
        for (g, s, t), v in self.seeds.items():
            rows.append((g, s, t, "seed", float(v)))
        for (g, s, t), v in self.elo.items():
            rows.append((g, s, t, "elo", v))
        for (g, s, t), v in self.quality.items():
            rows.append((g, s, t, "quality", v))
        for (g, s, t), a in self.box.items():
            rows.append((g, s, t, "points", a.points))
            rows.append((g, s, t, "games_played", float(a.games_played)))
            if a.stats is not None:
                for name, v in zip(BOX_FIELDS, a.stats):
                    rows.append((g, s, t, "box_" + name, v))
        rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
        return rows

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["gender", "season", "team", "feature", "value"])
            for g, s, t, name, v in self.to_long_rows():
                w.writerow([g, s, t, name, repr(float(v))])

    @classmethod
    def read_csv(cls, path):
        seeds, elo, quality = {}, {}, {}
        box_parts = defaultdict(dict)
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                key = (rec["gender"], int(rec["season"]), int(rec["team"]))
                name, v = rec["feature"], float(rec["value"])
                if name == "seed":
                    seeds[key] = int(v)
                elif name == "elo":
                    elo[key] = v
                elif name == "quality":
                    quality[key] = v
                else:
                    box_parts[key][name] = v
        box = {}
        for key, parts in box_parts.items():
            stats = None
            if all("box_" + f in parts for f in BOX_FIELDS):
                stats = tuple(parts["box_" + f] for f in BOX_FIELDS)
            box[key] = BoxAverages(points=parts["points"], games_played=int(parts["games_played"]), stats=stats)
        return cls(seeds=seeds, elo=elo, quality=quality, box=box)

    def summary(self):
        """Per-feature distribution summary: mean, std, min, quartiles, max."""
        values = defaultdict(list)
        for _, _, _, name, v in self.to_long_rows():
            values[name].append(v)
        out = []
        for name in sorted(values):
            a = np.asarray(values[name])
            q25, q50, q75 = np.percentile(a, [25, 50, 75])
            out.append({
                "feature": name, "count": int(a.size), "mean": float(a.mean()),
                "std": float(a.std(ddof=1)) if a.size > 1 else math.nan,
                "min": float(a.min()), "25%": float(q25), "50%": float(q50),
                "75%": float(q75), "max": float(a.max()),
            })
        return out


def assemble_features(t1, t2, gender, season, tables: FeatureTables,
                      groups: Sequence[str] = DEFAULT_GROUPS, label=None) -> MatchupSample:
    check_groups(groups)
    x = np.array([
        tables.team_row(gender, season, t1, groups),
        tables.team_row(gender, season, t2, groups),
    ], dtype=np.float64)
    return MatchupSample(x=x, label=label, season=season, gender=gender, t1=t1, t2=t2)


def build_matrix(samples: Sequence[MatchupSample]):
    """Stack samples into ``X`` of shape (n, 2, d) and a label vector (None if unlabeled)."""
    if not samples:
        raise ValueError("no samples")
    X = np.stack([s.x for s in samples])
    labels = [s.label for s in samples]
    y = None if any(l is None for l in labels) else np.asarray(labels, dtype=np.int64)
    return X, y
