"""Serialized score tables (``scores.csv``) and number formatting."""

from __future__ import annotations

import csv
import io
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .indicators import IndicatorTable, JournalScore, Mode

SCORE_COLUMNS = ("journal_id", "mode", "m", "n", "rip", "dcp", "rdcp", "snip", "flags")
PLACES = Decimal("0.0001")


def format_ratio(value: Fraction | None) -> str:
    """Exact value rounded half-to-even at four decimals; empty when undefined."""
    if value is None:
        return ""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = 60
        dec = Decimal(value.numerator) / Decimal(value.denominator)
        text = str(dec.quantize(PLACES, rounding=ROUND_HALF_EVEN))
    return "0.0000" if text == "-0.0000" else text


def _flags_text(score: JournalScore) -> str:
    flags = sorted(score.flags)
    if score.dropped:
        flags.append(f"dropped={score.dropped}")
    return ";".join(flags)


def scores_csv_text(table: IndicatorTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCORE_COLUMNS)
    mode = table.mode.value.replace("_", "-")
    for jid in sorted(table.scores):
        s = table.scores[jid]
        writer.writerow([
            jid, mode, s.m, s.n,
            format_ratio(s.rip), format_ratio(s.dcp), format_ratio(s.rdcp), format_ratio(s.snip),
            _flags_text(s),
        ])
    return buf.getvalue()


def write_scores_csv(table: IndicatorTable, path: str | Path) -> None:
    Path(path).write_bytes(scores_csv_text(table).encode("utf-8"))


def _parse_ratio(text: str) -> Fraction | None:
    text = text.strip()
    return Fraction(text) if text else None


def read_scores_csv(path: str | Path) -> IndicatorTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"file not found: {path}")
    scores = {}
    modes = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        absent = [c for c in ("journal_id", "m", "snip") if c not in (reader.fieldnames or [])]
        if absent:
            raise ValueError(f"{path}: missing column(s) {absent}")
        for row in reader:
            flags = [f for f in (row.get("flags") or "").split(";") if f]
            dropped = 0
            for f in list(flags):
                if f.startswith("dropped="):
                    dropped = int(f.split("=", 1)[1])
                    flags.remove(f)
            jid = row["journal_id"]
            scores[jid] = JournalScore(
                journal_id=jid,
                m=int(row["m"]),
                n=int(row.get("n") or 0),
                rip=_parse_ratio(row.get("rip") or ""),
                dcp=_parse_ratio(row.get("dcp") or ""),
                rdcp=_parse_ratio(row.get("rdcp") or ""),
                snip=_parse_ratio(row["snip"]),
                flags=frozenset(flags),
                dropped=dropped,
            )
            if row.get("mode"):
                modes.add(row["mode"])
    if len(modes) > 1:
        raise ValueError(f"{path}: mixed modes {sorted(modes)}")
    mode = Mode.parse(modes.pop()) if modes else Mode.SNIP_REVISED
    return IndicatorTable(mode, None, scores, notes=f"loaded from {path.name}")
