import csv
import logging

import pytest
from hypothesis import given, strategies as st

from ncaa_forecast.ingest import (
    COMPACT_COLUMNS,
    DETAILED_COLUMNS,
    IngestError,
    game_to_row,
    parse_games,
    parse_seed_string,
    parse_seeds,
    parse_teams,
)

BOX = [27, 60, 8, 20, 16, 22, 10, 25, 14, 11, 6, 3, 18]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def detailed_row(season=2024, day=10, w=1101, ws=78, l=1102, ls=70, ot=0, wbox=None, lbox=None):
    return [season, day, w, ws, l, ls, "N", ot] + list(wbox or BOX) + list(lbox or BOX)


def test_detailed_row_maps_fields(tmp_path):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row()])
    (g,) = parse_games(path, "men")
    assert (g.season, g.day_num, g.w_team, g.w_score, g.l_team, g.l_score, g.num_ot) == (2024, 10, 1101, 78, 1102, 70, 0)
    assert g.gender == "men"
    assert g.w_stats.fgm == 27 and g.l_stats.pf == 18
    assert g.w_loc == "N"


def test_compact_file_has_no_stats(tmp_path):
    path = write_csv(tmp_path / "c.csv", COMPACT_COLUMNS, [[2024, 10, 1101, 78, 1102, 70, "H", 1]])
    (g,) = parse_games(path, "women")
    assert g.w_stats is None and g.l_stats is None and g.num_ot == 1


def test_winner_score_not_greater_is_rejected_with_row(tmp_path):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row(), detailed_row(ws=70, ls=78)])
    with pytest.raises(IngestError, match=r"row 3: winner score not greater"):
        parse_games(path, "men")


def test_non_strict_skips_bad_rows(tmp_path, caplog):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row(ws=70, ls=78), detailed_row()])
    with caplog.at_level(logging.WARNING):
        games = parse_games(path, "men", strict=False)
    assert len(games) == 1
    assert "row 2 skipped" in caplog.text


def test_empty_file_warns(tmp_path, caplog):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [])
    with caplog.at_level(logging.WARNING):
        assert parse_games(path, "men") == []
    assert "no data rows" in caplog.text


def test_missing_file(tmp_path):
    with pytest.raises(IngestError, match="missing file"):
        parse_games(tmp_path / "nope.csv", "men")


def test_unknown_column(tmp_path):
    path = write_csv(tmp_path / "g.csv", list(COMPACT_COLUMNS) + ["Extra"], [])
    with pytest.raises(IngestError, match="Extra"):
        parse_games(path, "men")


def test_non_numeric_field(tmp_path):
    row = detailed_row()
    row[3] = "seventy"
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [row])
    with pytest.raises(IngestError, match="non-numeric.*WScore"):
        parse_games(path, "men")


def test_shot_inequality_rejected(tmp_path):
    bad = list(BOX)
    bad[0] = 70  # FGM > FGA
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row(wbox=bad)])
    with pytest.raises(IngestError, match="row 2"):
        parse_games(path, "men")


def test_same_team_rejected(tmp_path):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row(l=1101)])
    with pytest.raises(IngestError, match="same team"):
        parse_games(path, "men")


def test_unknown_gender(tmp_path):
    path = write_csv(tmp_path / "g.csv", DETAILED_COLUMNS, [detailed_row()])
    with pytest.raises(IngestError, match="gender"):
        parse_games(path, "mixed")


@pytest.mark.parametrize("s,expected", [("W01", 1), ("X16a", 16), ("Y11b", 11), ("Z08", 8)])
def test_seed_digits(s, expected):
    assert parse_seed_string(s) == expected


def test_seed_without_digits():
    with pytest.raises(IngestError, match="no digits"):
        parse_seed_string("WXX")


def test_parse_seeds_names_bad_row(tmp_path):
    path = write_csv(tmp_path / "s.csv", ["Season", "Seed", "TeamID"], [[2024, "W01", 1101], [2024, "WXX", 1102]])
    with pytest.raises(IngestError, match="row 3"):
        parse_seeds(path, "men")


def test_parse_seeds(tmp_path):
    path = write_csv(tmp_path / "s.csv", ["Season", "Seed", "TeamID"], [[2024, "W01", 1101], [2024, "X16a", 1102]])
    entries = parse_seeds(path, "men")
    assert [(e.team, e.seed_num, e.seed_str) for e in entries] == [(1101, 1, "W01"), (1102, 16, "X16a")]


def test_parse_teams(tmp_path):
    path = write_csv(tmp_path / "t.csv", ["TeamID", "TeamName"], [[1101, "A"], [1102, "B"]])
    assert parse_teams(path) == {1101: "A", 1102: "B"}


def test_parse_teams_duplicate(tmp_path):
    path = write_csv(tmp_path / "t.csv", ["TeamID", "TeamName"], [[1101, "A"], [1101, "B"]])
    with pytest.raises(IngestError, match="duplicate team id 1101"):
        parse_teams(path)


def test_parse_teams_empty(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("")
    assert parse_teams(path) == {}
    write_csv(path, ["TeamID", "TeamName"], [])
    assert parse_teams(path) == {}


counts = st.integers(min_value=0, max_value=60)


@st.composite
def box_stats(draw):
    fga, fga3, fta = draw(counts), draw(counts), draw(counts)
    fgm = draw(st.integers(0, fga))
    fgm3 = draw(st.integers(0, fga3))
    ftm = draw(st.integers(0, fta))
    rest = [draw(counts) for _ in range(7)]
    return [fgm, fga, fgm3, fga3, ftm, fta] + rest


@given(w=box_stats(), l=box_stats(), ls=st.integers(0, 150), margin=st.integers(1, 60), ot=st.integers(0, 4),
       day=st.integers(0, 154), teams=st.lists(st.integers(1000, 9999), min_size=2, max_size=2, unique=True))
def test_roundtrip_is_lossless(tmp_path_factory, w, l, ls, margin, ot, day, teams):
    path = tmp_path_factory.mktemp("rt") / "g.csv"
    row = [2020, day, teams[0], ls + margin, teams[1], ls, "A", ot] + w + l
    write_csv(path, DETAILED_COLUMNS, [row])
    (g,) = parse_games(path, "women")
    assert game_to_row(g) == row


@given(w=box_stats(), field=st.sampled_from([(0, 1), (2, 3), (4, 5)]), extra=st.integers(1, 20),
       swap_scores=st.booleans(), negative=st.booleans())
def test_fuzzed_invalid_rows_are_rejected(tmp_path_factory, w, field, extra, swap_scores, negative):
    made, att = field
    bad = list(w)
    bad[made] = bad[att] + extra  # makes exceed attempts
    if negative:
        bad[6] = -1
    ws, ls = (60, 70) if swap_scores else (70, 60)
    path = tmp_path_factory.mktemp("bad") / "g.csv"
    write_csv(path, DETAILED_COLUMNS, [[2020, 5, 1101, ws, 1102, ls, "N", 0] + bad + list(w)])
    with pytest.raises(IngestError):
        parse_games(path, "men")
    assert parse_games(path, "men", strict=False) == []
