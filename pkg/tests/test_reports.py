from fractions import Fraction

import pytest

from snipkit.indicators import Mode, build_table
from snipkit.reports import SCORE_COLUMNS, format_ratio, read_scores_csv, scores_csv_text, write_scores_csv
from snipkit.selection import select_citing_journals

from builders import merger_corpus


@pytest.mark.parametrize(
    "value, text",
    [
        (None, ""),
        (Fraction(27, 5), "5.4000"),
        (Fraction(1, 3), "0.3333"),
        (Fraction(2, 3), "0.6667"),
        # ties go to the even digit
        (Fraction(5, 100000), "0.0000"),
        (Fraction(15, 100000), "0.0002"),
        (Fraction(25, 100000), "0.0002"),
        (Fraction(-1, 100000), "0.0000"),
        (Fraction(-7, 4), "-1.7500"),
    ],
)
def test_format_ratio(value, text):
    assert format_ratio(value) == text


def test_csv_layout():
    c = merger_corpus()
    table = build_table(c, Mode.SNIP_REVISED, select_citing_journals(c), min_pubs=0)
    lines = scores_csv_text(table).splitlines()
    assert lines[0] == ",".join(SCORE_COLUMNS)
    rows = {line.split(",")[0]: line for line in lines[1:]}
    assert rows["X"] == "X,snip-revised,10,120,12.0000,2.0000,,6.0000,citing"
    # journals without window publications are not scored
    assert "XY" not in rows and "G" not in rows
    assert [line.split(",")[0] for line in lines[1:]] == sorted(rows)


def test_round_trip(tmp_path):
    c = merger_corpus()
    table = build_table(c, Mode.SNIP_ORIGINAL, None, min_pubs=0)
    path = tmp_path / "scores.csv"
    write_scores_csv(table, path)
    back = read_scores_csv(path)
    assert back.mode is Mode.SNIP_ORIGINAL
    assert back["X"].snip == 6
    assert back["X"].flags == table["X"].flags
    assert set(back.scores) == set(table.scores)


def test_read_errors(tmp_path):
    with pytest.raises(FileNotFoundError, match="file not found"):
        read_scores_csv(tmp_path / "none.csv")
    path = tmp_path / "bad.csv"
    path.write_text("journal_id,snip\nA,1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing column"):
        read_scores_csv(path)
    path.write_text("journal_id,mode,m,snip\nA,rip,1,1\nB,apriori,1,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="mixed modes"):
        read_scores_csv(path)
