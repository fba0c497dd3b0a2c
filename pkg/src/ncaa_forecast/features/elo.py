"""Sequential Elo ratings over regular-season games."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from ..prep import MatchRow

TeamKey = Tuple[str, int, int]  # (gender, season, team)


@dataclass(frozen=True)
class EloConfig:
    base_rating: float = 1000.0
    k_factor: float = 100.0
    scale: float = 400.0
    logistic_base: float = 10.0
    carry_over: bool = False

    def __post_init__(self):
        if self.k_factor <= 0:
            raise ValueError("k_factor must be positive")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def elo_expected(r_a, r_b, cfg=EloConfig()):
    """Probability that a team rated ``r_a`` beats one rated ``r_b``."""
    return 1.0 / (1.0 + cfg.logistic_base ** ((r_b - r_a) / cfg.scale))


def elo_update(r, actual, expected, cfg=EloConfig()):
    return r + cfg.k_factor * (actual - expected)


def compute_elo(rows: Iterable[MatchRow], cfg=EloConfig()) -> Dict[TeamKey, float]:
    """End-of-season ratings keyed by (gender, season, team).

    ``rows`` holds one winner-perspective row per game, ordered by
    (season, day_num) within each gender. Ratings start from
    ``cfg.base_rating`` each season unless ``cfg.carry_over`` is set, in
    which case a team resumes from its previous season's final rating.
    """
    final: Dict[TeamKey, float] = {}
    current: Dict[Tuple[str, int], float] = {}  # (gender, team) -> rating within the active season
    last_pos: Dict[str, Tuple[int, int]] = {}
    active_season: Dict[str, int] = {}
    last_final: Dict[Tuple[str, int], float] = {}

    def flush(gender, season):
        for (g, team), rating in list(current.items()):
            if g == gender:
                final[(g, season, team)] = rating
                last_final[(g, team)] = rating
                del current[(g, team)]

    for row in rows:
        g = row.gender
        pos = (row.season, row.day_num)
        if g in last_pos and pos < last_pos[g]:
            raise ValueError(f"rows not sorted by (season, day_num) for {g}: {pos} after {last_pos[g]}")
        last_pos[g] = pos
        if g in active_season and active_season[g] != row.season:
            flush(g, active_season[g])
        active_season[g] = row.season

        for team in (row.t1, row.t2):
            if (g, team) not in current:
                start = cfg.base_rating
                if cfg.carry_over:
                    start = last_final.get((g, team), cfg.base_rating)
                current[(g, team)] = start

        r1, r2 = current[(g, row.t1)], current[(g, row.t2)]
        e1 = elo_expected(r1, r2, cfg)
        s1 = float(row.label)
        current[(g, row.t1)] = elo_update(r1, s1, e1, cfg)
        current[(g, row.t2)] = elo_update(r2, 1.0 - s1, 1.0 - e1, cfg)

    for g, season in active_season.items():
        flush(g, season)
    return final
