"""Reading and writing the on-disk corpus formats.

``journals.csv``          journal_id,title,is_trade
``publications.jsonl``    one JSON object per line
``merges.csv``            old_journal_id,new_journal_id
corpus cache            gzip-compressed columnar JSON (CSR reference lists)
"""

from __future__ import annotations

import csv
import gzip
import io
import json
from pathlib import Path
from typing import Iterator

from .ingest import ERROR_KEY, LINE_KEY, IngestError
from .model import Corpus, Journal, Publication

JOURNAL_COLUMNS = ("journal_id", "title", "is_trade")
MERGE_COLUMNS = ("old_journal_id", "new_journal_id")
CACHE_FORMAT = "snipkit-corpus/1"


class FormatError(IngestError):
    """An input file is unreadable as a whole (missing file, bad header)."""


def _open_text(path: Path):
    try:
        return open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise FormatError(f"file not found: {path}") from None


def _csv_rows(path: Path, required: tuple[str, ...]) -> Iterator[dict]:
    with _open_text(path) as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        absent = [c for c in required if c not in header]
        if absent:
            raise FormatError(f"{path}: missing column(s) {absent}")
        for row in reader:
            row[LINE_KEY] = reader.line_num
            if None in row:
                row = {LINE_KEY: reader.line_num, ERROR_KEY: "too many fields"}
            yield row


def read_journals_csv(path: str | Path) -> list[dict]:
    return list(_csv_rows(Path(path), JOURNAL_COLUMNS))


def read_publications_jsonl(path: str | Path) -> list[dict]:
    records = []
    with _open_text(Path(path)) as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                records.append({LINE_KEY: line_no, ERROR_KEY: f"invalid JSON: {exc.msg}"})
                continue
            if not isinstance(rec, dict):
                records.append({LINE_KEY: line_no, ERROR_KEY: "record is not a JSON object"})
                continue
            rec[LINE_KEY] = line_no
            records.append(rec)
    return records


def read_merges_csv(path: str | Path) -> dict[str, str]:
    merges: dict[str, str] = {}
    for row in _csv_rows(Path(path), MERGE_COLUMNS):
        if ERROR_KEY in row:
            raise FormatError(f"{path}:{row[LINE_KEY]}: {row[ERROR_KEY]}")
        old = (row["old_journal_id"] or "").strip()
        new = (row["new_journal_id"] or "").strip()
        if not old or not new:
            raise FormatError(f"{path}:{row[LINE_KEY]}: empty journal id")
        if merges.get(old, new) != new:
            raise FormatError(f"{path}:{row[LINE_KEY]}: {old!r} mapped to two successors")
        merges[old] = new
    return merges


def write_journals_csv(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(JOURNAL_COLUMNS)
        for j in corpus.journals.values():
            for title in j.titles or ("",):
                writer.writerow([j.journal_id, title, int(j.is_trade)])


def write_publications_jsonl(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus.publications.values():
            rec = {
                "pub_id": p.pub_id,
                "journal_id": p.journal_id,
                "year": p.year,
                "doc_type": p.doc_type,
                "references": list(p.references),
            }
            if p.total_references != len(p.references):
                rec["total_references"] = p.total_references
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def export_corpus(corpus: Corpus, directory: str | Path) -> tuple[Path, Path]:
    """Write ``journals.csv`` and ``publications.jsonl`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    jpath, ppath = directory / "journals.csv", directory / "publications.jsonl"
    write_journals_csv(corpus, jpath)
    write_publications_jsonl(corpus, ppath)
    return jpath, ppath


def corpus_to_columns(corpus: Corpus) -> dict:
    pubs = list(corpus.publications.values())
    index = {p.pub_id: i for i, p in enumerate(pubs)}
    offsets = [0]
    targets: list[int] = []
    for p in pubs:
        targets.extend(index[r] for r in p.references)
        offsets.append(len(targets))
    journals = list(corpus.journals.values())
    return {
        "format": CACHE_FORMAT,
        "year_of_analysis": corpus.year_of_analysis,
        "doc_type_allowlist": sorted(corpus.doc_type_allowlist),
        "journals": {
            "journal_id": [j.journal_id for j in journals],
            "titles": [list(j.titles) for j in journals],
            "is_trade": [j.is_trade for j in journals],
            "predecessor_ids": [list(j.predecessor_ids) for j in journals],
        },
        "publications": {
            "pub_id": [p.pub_id for p in pubs],
            "journal_id": [p.journal_id for p in pubs],
            "year": [p.year for p in pubs],
            "doc_type": [p.doc_type for p in pubs],
            "total_references": [p.total_references for p in pubs],
            "ref_offsets": offsets,
            "ref_targets": targets,
        },
    }


def corpus_from_columns(data: dict) -> Corpus:
    if data.get("format") != CACHE_FORMAT:
        raise FormatError(f"unsupported corpus cache format {data.get('format')!r}")
    jc = data["journals"]
    journals = [
        Journal(jid, tuple(titles), bool(trade), tuple(preds))
        for jid, titles, trade, preds in zip(
            jc["journal_id"], jc["titles"], jc["is_trade"], jc["predecessor_ids"]
        )
    ]
    pc = data["publications"]
    ids, offsets, targets = pc["pub_id"], pc["ref_offsets"], pc["ref_targets"]
    publications = [
        Publication(
            pub_id=ids[i],
            journal_id=pc["journal_id"][i],
            year=pc["year"][i],
            doc_type=pc["doc_type"][i],
            references=tuple(ids[t] for t in targets[offsets[i]:offsets[i + 1]]),
            total_references=pc["total_references"][i],
        )
        for i in range(len(ids))
    ]
    return Corpus(data["year_of_analysis"], journals, publications, data["doc_type_allowlist"])


def save_corpus_cache(corpus: Corpus, path: str | Path) -> None:
    payload = json.dumps(corpus_to_columns(corpus), separators=(",", ":")).encode("utf-8")
    buf = io.BytesIO()
    # mtime=0 keeps the cache byte-identical across runs
    with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0, filename="") as gz:
        gz.write(payload)
    Path(path).write_bytes(buf.getvalue())


def load_corpus_cache(path: str | Path) -> Corpus:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    try:
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: not a corpus cache ({exc})") from None
    return corpus_from_columns(data)
