"""Season-averaged box-score statistics per team."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from ..ingest import BOX_FIELDS
from ..prep import MatchRow


@dataclass(frozen=True)
class BoxAverages:
    points: float
    games_played: int
    stats: Optional[Tuple[float, ...]] = None  # means in BOX_FIELDS order; None without detailed results


def season_box_averages(rows: Iterable[MatchRow]) -> Dict[int, BoxAverages]:
    """Average each team's own (team-1 side) stats over its rows.

    Rows must come from a single (gender, season) and include both
    perspectives so that every game counts once per team.
    """
    points = defaultdict(list)
    stats = defaultdict(list)
    for r in rows:
        points[r.t1].append(r.t1_score)
        if r.t1_stats is not None:
            stats[r.t1].append(r.t1_stats.as_tuple())
    out = {}
    for team, pts in points.items():
        s = stats.get(team)
        mean = tuple(float(v) for v in np.mean(np.asarray(s), axis=0)) if s else None
        out[team] = BoxAverages(points=float(np.mean(pts)), games_played=len(pts), stats=mean)
    return out


def compute_box_table(rows: Iterable[MatchRow]) -> Dict[Tuple[str, int, int], BoxAverages]:
    by_block = defaultdict(list)
    for r in rows:
        by_block[(r.gender, r.season)].append(r)
    table = {}
    for (gender, season), block in sorted(by_block.items()):
        for team, avg in season_box_averages(block).items():
            table[(gender, season, team)] = avg
    return table


__all__ = ["BOX_FIELDS", "BoxAverages", "season_box_averages", "compute_box_table"]
