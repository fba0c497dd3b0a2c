"""Overtime normalization and two-perspective match rows."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .ingest import BOX_FIELDS, BoxStats, GameRecord

REGULATION_MINUTES = 40.0
OVERTIME_MINUTES = 5.0


@dataclass(frozen=True)
class MatchRow:
    season: int
    day_num: int
    gender: str
    t1: int
    t2: int
    t1_score: float
    t2_score: float
    label: int
    t1_stats: Optional[BoxStats] = None
    t2_stats: Optional[BoxStats] = None
    source: str = "regular"

    @property
    def point_diff(self):
        return self.t1_score - self.t2_score

    def swapped(self):
        return MatchRow(
            season=self.season, day_num=self.day_num, gender=self.gender,
            t1=self.t2, t2=self.t1, t1_score=self.t2_score, t2_score=self.t1_score,
            label=1 - self.label, t1_stats=self.t2_stats, t2_stats=self.t1_stats,
            source=self.source,
        )


def overtime_factor(num_ot):
    if num_ot < 0:
        raise ValueError(f"num_ot must be >= 0, got {num_ot}")
    return REGULATION_MINUTES / (REGULATION_MINUTES + OVERTIME_MINUTES * num_ot)


def overtime_scale(stats, score, num_ot):
    """Rescale a team's box score and points to a 40-minute equivalent.

    ``stats`` may be None (compact results), in which case only the score
    is scaled.
    """
    factor = overtime_factor(num_ot)
    scaled = stats.scaled(factor) if stats is not None else None
    return scaled, score * factor


def symmetrize(games: Iterable[GameRecord], source="regular") -> List[MatchRow]:
    """Emit each game twice: winner as team 1 (label 1), then loser as team 1 (label 0)."""
    rows = []
    for g in games:
        w_stats, w_score = overtime_scale(g.w_stats, g.w_score, g.num_ot)
        l_stats, l_score = overtime_scale(g.l_stats, g.l_score, g.num_ot)
        win = MatchRow(
            season=g.season, day_num=g.day_num, gender=g.gender,
            t1=g.w_team, t2=g.l_team, t1_score=w_score, t2_score=l_score,
            label=1, t1_stats=w_stats, t2_stats=l_stats, source=source,
        )
        rows.append(win)
        rows.append(win.swapped())
    return rows


MATCH_ROW_COLUMNS = (
    ["season", "day_num", "gender", "source", "t1", "t2", "t1_score", "t2_score", "label", "point_diff"]
    + [f"t1_{f}" for f in BOX_FIELDS]
    + [f"t2_{f}" for f in BOX_FIELDS]
)


def write_match_rows(rows: Iterable[MatchRow], path):
    """Dump rows for inspection using the fixed ``MATCH_ROW_COLUMNS`` order.

    Box-score columns are left empty for rows built from compact results.
    Not used as model input: point_diff is outcome information.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MATCH_ROW_COLUMNS)
        for r in rows:
            blank = [""] * len(BOX_FIELDS)
            s1 = list(r.t1_stats.as_tuple()) if r.t1_stats is not None else blank
            s2 = list(r.t2_stats.as_tuple()) if r.t2_stats is not None else blank
            w.writerow(
                [r.season, r.day_num, r.gender, r.source, r.t1, r.t2,
                 repr(r.t1_score), repr(r.t2_score), r.label, repr(r.point_diff)]
                + [repr(v) if v != "" else "" for v in s1]
                + [repr(v) if v != "" else "" for v in s2]
            )
