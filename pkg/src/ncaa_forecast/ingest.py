"""Readers for the competition-style CSV files (game results, seeds, teams)."""

from __future__ import annotations

import csv
import logging
import os
import re
from dataclasses import astuple, dataclass, fields
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)

GENDERS = ("men", "women")

STAT_NAMES = (
    "FGM", "FGA", "FGM3", "FGA3", "FTM", "FTA",
    "OR", "DR", "Ast", "TO", "Stl", "Blk", "PF",
)

COMPACT_COLUMNS = ("Season", "DayNum", "WTeamID", "WScore", "LTeamID", "LScore", "WLoc", "NumOT")
DETAILED_COLUMNS = COMPACT_COLUMNS + tuple("W" + s for s in STAT_NAMES) + tuple("L" + s for s in STAT_NAMES)


class IngestError(ValueError):
    """Raised when an input file is missing or a row is malformed."""


@dataclass(frozen=True)
class BoxStats:
    """Per-team counting stats for one game. Values become floats after overtime scaling."""

    fgm: float
    fga: float
    fgm3: float
    fga3: float
    ftm: float
    fta: float
    oreb: float
    dreb: float
    ast: float
    to: float
    stl: float
    blk: float
    pf: float

    def as_tuple(self):
        return astuple(self)

    def scaled(self, factor):
        return BoxStats(*(v * factor for v in astuple(self)))

    def check(self):
        """Return an error message if the stats violate count constraints, else None."""
        vals = astuple(self)
        if any(v < 0 for v in vals):
            return "negative box-score count"
        if self.fgm > self.fga:
            return "FGM exceeds FGA"
        if self.fgm3 > self.fga3:
            return "FGM3 exceeds FGA3"
        if self.ftm > self.fta:
            return "FTM exceeds FTA"
        return None


BOX_FIELDS = tuple(f.name for f in fields(BoxStats))


@dataclass(frozen=True)
class GameRecord:
    season: int
    day_num: int
    w_team: int
    w_score: int
    l_team: int
    l_score: int
    num_ot: int
    gender: str
    w_stats: Optional[BoxStats] = None
    l_stats: Optional[BoxStats] = None
    w_loc: str = "N"


@dataclass(frozen=True)
class SeedEntry:
    season: int
    team: int
    seed_str: str
    seed_num: int
    gender: str


def _check_gender(gender):
    if gender not in GENDERS:
        raise IngestError(f"unknown gender tag {gender!r}; expected one of {GENDERS}")


def _open_reader(path):
    if not os.path.exists(path):
        raise IngestError(f"missing file: {path}")
    fh = open(path, newline="", encoding="utf-8")
    return fh, csv.reader(fh)


def _int(value, column, rownum):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise IngestError(f"row {rownum}: non-numeric value {value!r} in column {column}") from None


def _validate_game(g: GameRecord):
    if g.w_team == g.l_team:
        return "winner and loser are the same team"
    if g.w_score < 0 or g.l_score < 0:
        return "negative score"
    if g.w_score <= g.l_score:
        return "winner score not greater than loser score"
    if g.num_ot < 0:
        return "negative overtime count"
    for stats in (g.w_stats, g.l_stats):
        if stats is not None:
            msg = stats.check()
            if msg:
                return msg
    return None


def parse_games(path, gender, strict=True) -> List[GameRecord]:
    """Parse a results file (compact or detailed layout) into GameRecords.

    Row numbers in error messages count the header as row 1. With
    ``strict=False`` invalid rows are logged and skipped instead of raising.
    Compact files (no box-score columns) yield records whose stats are None.
    """
    _check_gender(gender)
    fh, reader = _open_reader(path)
    with fh:
        header = next(reader, None)
        if header is None:
            logger.warning("%s: empty file", path)
            return []
        header = [h.strip() for h in header]
        cols = set(header)
        if cols == set(DETAILED_COLUMNS):
            detailed = True
        elif cols == set(COMPACT_COLUMNS):
            detailed = False
        else:
            unknown = sorted(cols - set(DETAILED_COLUMNS))
            missing = sorted(set(COMPACT_COLUMNS) - cols)
            raise IngestError(f"{path}: unexpected header (unknown columns {unknown}, missing {missing})")
        idx = {name: i for i, name in enumerate(header)}

        games = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestError(f"{path}: row {rownum}: expected {len(header)} fields, got {len(row)}")
            get = lambda c: _int(row[idx[c]], c, rownum)  # noqa: E731
            w_stats = l_stats = None
            if detailed:
                w_stats = BoxStats(*(get("W" + s) for s in STAT_NAMES))
                l_stats = BoxStats(*(get("L" + s) for s in STAT_NAMES))
            g = GameRecord(
                season=get("Season"),
                day_num=get("DayNum"),
                w_team=get("WTeamID"),
                w_score=get("WScore"),
                l_team=get("LTeamID"),
                l_score=get("LScore"),
                num_ot=get("NumOT"),
                gender=gender,
                w_stats=w_stats,
                l_stats=l_stats,
                w_loc=row[idx["WLoc"]].strip(),
            )
            msg = _validate_game(g)
            if msg:
                if strict:
                    raise IngestError(f"{path}: row {rownum}: {msg}")
                logger.warning("%s: row %d skipped: %s", path, rownum, msg)
                continue
            games.append(g)
    if not games:
        logger.warning("%s: no data rows", path)
    return games


def game_to_row(g: GameRecord):
    """Serialize a GameRecord back to a row in the detailed (or compact) column order."""
    row = [g.season, g.day_num, g.w_team, g.w_score, g.l_team, g.l_score, g.w_loc, g.num_ot]
    if g.w_stats is not None:
        row += list(g.w_stats.as_tuple()) + list(g.l_stats.as_tuple())
    return row


_SEED_DIGITS = re.compile(r"\d+")


def parse_seed_string(seed_str):
    """Extract the seed number from strings like ``W01`` or ``X16a``."""
    m = _SEED_DIGITS.search(seed_str)
    if m is None:
        raise IngestError(f"seed string {seed_str!r} has no digits")
    num = int(m.group())
    if not 1 <= num <= 16:
        raise IngestError(f"seed {seed_str!r} out of range 1-16")
    return num


def parse_seeds(path, gender) -> List[SeedEntry]:
    _check_gender(gender)
    fh, reader = _open_reader(path)
    out = []
    with fh:
        header = next(reader, None)
        if header is None:
            return out
        idx = {h.strip(): i for i, h in enumerate(header)}
        for col in ("Season", "Seed", "TeamID"):
            if col not in idx:
                raise IngestError(f"{path}: missing column {col}")
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            seed_str = row[idx["Seed"]].strip()
            try:
                num = parse_seed_string(seed_str)
            except IngestError as exc:
                raise IngestError(f"{path}: row {rownum}: {exc}") from None
            out.append(SeedEntry(
                season=_int(row[idx["Season"]], "Season", rownum),
                team=_int(row[idx["TeamID"]], "TeamID", rownum),
                seed_str=seed_str,
                seed_num=num,
                gender=gender,
            ))
    return out


def parse_teams(path) -> Dict[int, str]:
    fh, reader = _open_reader(path)
    teams: Dict[int, str] = {}
    with fh:
        header = next(reader, None)
        if header is None:
            return teams
        idx = {h.strip(): i for i, h in enumerate(header)}
        for col in ("TeamID", "TeamName"):
            if col not in idx:
                raise IngestError(f"{path}: missing column {col}")
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            tid = _int(row[idx["TeamID"]], "TeamID", rownum)
            if tid in teams:
                raise IngestError(f"{path}: row {rownum}: duplicate team id {tid}")
            teams[tid] = row[idx["TeamName"]]
    return teams
