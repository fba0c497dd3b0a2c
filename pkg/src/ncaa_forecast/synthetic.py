"""Synthetic competition-format data for demos and end-to-end tests.

Teams get a latent strength in points; game margins are strength gaps
plus Gaussian noise. Box scores are generated so that they add up to the
score and satisfy the attempt/make constraints.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .ingest import DETAILED_COLUMNS
from .pipeline import PREFIX

TEAM_ID_BASE = {"men": 1101, "women": 3101}
REGIONS = "WXYZ"


def _box(rng, score):
    ftm = int(rng.integers(8, 20))
    fgm3 = int(rng.integers(3, 11))
    rest = score - ftm - 3 * fgm3
    while rest < 0:
        if fgm3 > 0:
            fgm3 -= 1
        else:
            ftm -= 1
        rest = score - ftm - 3 * fgm3
    if rest % 2:
        ftm += 1
        rest -= 1
    fgm2 = rest // 2
    fgm = fgm2 + fgm3
    fga3 = fgm3 + int(rng.integers(5, 16))
    fga = fgm + int(rng.integers(20, 35)) + (fga3 - fgm3)
    fta = ftm + int(rng.integers(2, 9))
    return [fgm, fga, fgm3, fga3, ftm, fta,
            int(rng.integers(5, 16)), int(rng.integers(18, 30)), int(rng.integers(8, 20)),
            int(rng.integers(8, 18)), int(rng.integers(3, 11)), int(rng.integers(1, 7)),
            int(rng.integers(12, 23))]


def _game(rng, season, day, a, b, strength, noise):
    margin = strength[a] - strength[b] + rng.normal(0.0, noise)
    base = rng.normal(68.0, 6.0)
    sa = max(30, int(round(base + margin / 2)))
    sb = max(30, int(round(base - margin / 2)))
    num_ot = 0
    if sa == sb:
        num_ot = 1
        extra = int(rng.integers(4, 12))
        sa, sb = sa + extra + (1 if margin >= 0 else 0), sb + extra + (0 if margin >= 0 else 1)
    w, l, ws, ls = (a, b, sa, sb) if sa > sb else (b, a, sb, sa)
    return [season, day, w, ws, l, ls, "N", num_ot] + _box(rng, ws) + _box(rng, ls)


def _write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def generate_dataset(out_dir, seasons=range(2018, 2025), n_teams=32, games_per_team=20,
                     n_tourney=16, genders=("men", "women"), noise=10.0, strength_sd=7.0, seed=0):
    """Write Kaggle-named CSVs for ``genders`` into ``out_dir``; returns true strengths.

    ``n_tourney`` must be a power of two (single-elimination bracket) no larger
    than ``n_teams``. Fields of 16 or more are split into regions of 16 seeds;
    smaller fields form one region seeded 1..n_tourney.
    """
    if n_tourney < 2 or n_tourney & (n_tourney - 1) or n_tourney > min(n_teams, 16 * len(REGIONS)):
        raise ValueError(f"n_tourney must be a power of two between 2 and min(n_teams, {16 * len(REGIONS)})")
    n_regions = max(1, n_tourney // 16)
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    truth = {}
    for gender in genders:
        p = PREFIX[gender]
        ids = [TEAM_ID_BASE[gender] + i for i in range(n_teams)]
        base_strength = {t: rng.normal(0.0, strength_sd) for t in ids}
        regular, tourney, seeds = [], [], []
        for season in seasons:
            strength = {t: base_strength[t] + rng.normal(0.0, 2.0) for t in ids}
            truth.update({(gender, season, t): s for t, s in strength.items()})
            n_games = n_teams * games_per_team // 2
            for g in range(n_games):
                a, b = rng.choice(ids, size=2, replace=False)
                regular.append(_game(rng, season, 1 + (g * 132) // n_games, int(a), int(b), strength, noise))
            # seed the strongest teams by a noisy view of strength
            view = sorted(ids, key=lambda t: -(strength[t] + rng.normal(0.0, 2.0)))[:n_tourney]
            seed_of = {}
            for rank, t in enumerate(view):
                region, num = REGIONS[rank % n_regions], rank // n_regions + 1
                seed_of[t] = num
                seeds.append([season, f"{region}{num:02d}", t])
            # bracket: 1 v 16, 8 v 9, ... within the field, by seed number
            field = sorted(view, key=lambda t: seed_of[t])
            order = _bracket_order(len(field))
            alive = [field[i] for i in order]
            day = 134
            while len(alive) > 1:
                nxt = []
                for i in range(0, len(alive), 2):
                    row = _game(rng, season, day, alive[i], alive[i + 1], strength, noise)
                    tourney.append(row)
                    nxt.append(row[2])
                alive = nxt
                day += 2
        _write(os.path.join(out_dir, f"{p}RegularSeasonDetailedResults.csv"), DETAILED_COLUMNS, regular)
        _write(os.path.join(out_dir, f"{p}NCAATourneyDetailedResults.csv"), DETAILED_COLUMNS, tourney)
        _write(os.path.join(out_dir, f"{p}NCAATourneySeeds.csv"), ["Season", "Seed", "TeamID"], seeds)
        if gender == "men":
            _write(os.path.join(out_dir, "MTeams.csv"), ["TeamID", "TeamName", "FirstD1Season", "LastD1Season"],
                   [[t, f"Men Team {t}", min(seasons), max(seasons)] for t in ids])
        else:
            _write(os.path.join(out_dir, "WTeams.csv"), ["TeamID", "TeamName"],
                   [[t, f"Women Team {t}"] for t in ids])
    return truth


def _bracket_order(n):
    order = [0]
    while len(order) < n:
        m = 2 * len(order)
        order = [x for i in order for x in (i, m - 1 - i)]
    return order
