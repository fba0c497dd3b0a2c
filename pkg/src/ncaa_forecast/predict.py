"""All-pairs matchup enumeration and the ``ID,Pred`` submission file."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Sequence

import numpy as np

CLAMP = (0.001, 0.999)


@dataclass(frozen=True, order=True)
class MatchupId:
    season: int
    team_low: int
    team_high: int
    gender: str = ""

    def __post_init__(self):
        if not self.team_low < self.team_high:
            raise ValueError(f"team_low must be < team_high, got {self.team_low}, {self.team_high}")

    def __str__(self):
        return f"{self.season}_{self.team_low}_{self.team_high}"

    @classmethod
    def parse(cls, s, gender=""):
        season, low, high = (int(v) for v in s.split("_"))
        return cls(season, low, high, gender)


def enumerate_matchups(season, teams_by_gender: Dict[str, Sequence[int]]) -> List[MatchupId]:
    """Every unordered pair within each gender, sorted by (team_low, team_high)."""
    seen = {}
    for gender, teams in teams_by_gender.items():
        counts = Counter(teams)
        dup = sorted(t for t, c in counts.items() if c > 1)
        if dup:
            raise ValueError(f"duplicate team ids for {gender}: {dup}")
        for t in teams:
            if t in seen and seen[t] != gender:
                raise ValueError(f"team {t} listed for both {seen[t]} and {gender}")
            seen[t] = gender
    ids = []
    for gender, teams in teams_by_gender.items():
        for a, b in combinations(sorted(teams), 2):
            ids.append(MatchupId(season, a, b, gender))
    ids.sort(key=lambda m: (m.season, m.team_low, m.team_high))
    return ids


def write_submission(ids: Sequence[MatchupId], probs, path, clamp=False):
    """Write ``ID,Pred`` rows; Pred is the chance that ``team_low`` wins, six decimals."""
    probs = np.asarray(probs, dtype=np.float64)
    if len(ids) != probs.size:
        raise ValueError(f"length mismatch: {len(ids)} ids, {probs.size} probabilities")
    if clamp:
        probs = np.clip(probs, *CLAMP)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ID", "Pred"])
        for mid, p in zip(ids, probs):
            w.writerow([str(mid), f"{p:.6f}"])


def read_submission(path):
    ids, probs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["ID", "Pred"]:
            raise ValueError(f"unexpected submission header {header}")
        for row in reader:
            ids.append(MatchupId.parse(row[0]))
            probs.append(float(row[1]))
    return ids, np.asarray(probs)


def prediction_histogram(probs, n_bins=20):
    counts, edges = np.histogram(np.asarray(probs, dtype=np.float64), bins=n_bins, range=(0.0, 1.0))
    return [(float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)]


def write_histogram_csv(hist, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_low", "bin_high", "count"])
        for lo, hi, c in hist:
            w.writerow([repr(lo), repr(hi), c])
