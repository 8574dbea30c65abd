"""Turn raw journal/publication records into a resolved :class:`Corpus`."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Iterable, Mapping

from .model import DEFAULT_DOC_TYPES, Corpus, Journal, Publication, normalize_doc_type

# Readers attach the source line under this key; malformed lines carry an error.
LINE_KEY = "__line__"
ERROR_KEY = "__error__"


class IngestError(Exception):
    """Hard ingestion failure: the corpus would be ambiguous or inconsistent."""


class DuplicatePublicationError(IngestError):
    def __init__(self, pub_id: str, lines: tuple[int, int]) -> None:
        super().__init__(f"duplicate pub_id {pub_id!r} (lines {lines[0]} and {lines[1]})")
        self.pub_id = pub_id
        self.lines = lines


class MergeCycleError(IngestError):
    def __init__(self, cycle: list[str]) -> None:
        super().__init__("title-change merge map contains a cycle: " + " -> ".join(cycle))
        self.cycle = cycle


@dataclass(frozen=True)
class IngestConfig:
    year_of_analysis: int
    doc_type_allowlist: frozenset[str] = DEFAULT_DOC_TYPES


@dataclass(frozen=True)
class RecordError:
    source: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.source}:{self.line}: {self.message}"


@dataclass
class IngestReport:
    journals_read: int = 0
    publications_read: int = 0
    publications_kept: int = 0
    malformed_records: int = 0
    doc_type_dropped: int = 0
    no_references_dropped: int = 0
    unresolved_journal_dropped: int = 0
    references_kept: int = 0
    references_unresolved: int = 0
    references_duplicate: int = 0
    references_self: int = 0
    errors: list[RecordError] = field(default_factory=list)

    def counters(self) -> dict[str, int]:
        return {k: v for k, v in asdict(self).items() if k != "errors"}

    def to_json(self) -> str:
        payload: dict[str, Any] = self.counters()
        payload["errors"] = [asdict(e) for e in self.errors]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _as_id(value: Any, name: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ValueError(f"{name} must be a string")
    text = str(value).strip()
    if not text:
        raise ValueError(f"{name} is empty")
    return text


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"{name} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value)
    raise ValueError(f"{name} must be an integer, got {value!r}")


def _as_flag(value: Any, name: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true"):
        return True
    if text in ("0", "false", ""):
        return False
    raise ValueError(f"{name} must be 0 or 1, got {value!r}")


def _numbered(records: Iterable[Mapping[str, Any]], first_line: int):
    for pos, rec in enumerate(records):
        yield rec.get(LINE_KEY, pos + first_line), rec


def _parse_journals(records, report: IngestReport) -> dict[str, Journal]:
    journals: dict[str, Journal] = {}
    for line, rec in _numbered(records, first_line=2):
        if ERROR_KEY in rec:
            report.malformed_records += 1
            report.errors.append(RecordError("journals", line, rec[ERROR_KEY]))
            continue
        report.journals_read += 1
        try:
            jid = _as_id(rec.get("journal_id"), "journal_id")
            title = str(rec.get("title") or "").strip()
            is_trade = _as_flag(rec.get("is_trade", 0), "is_trade")
        except ValueError as exc:
            report.malformed_records += 1
            report.errors.append(RecordError("journals", line, str(exc)))
            continue
        if jid in journals:
            known = journals[jid]
            if known.is_trade != is_trade:
                report.malformed_records += 1
                report.errors.append(
                    RecordError("journals", line, f"conflicting is_trade for journal {jid!r}")
                )
                continue
            if title and title not in known.titles:
                journals[jid] = replace(known, titles=known.titles + (title,))
            continue
        journals[jid] = Journal(jid, (title,) if title else (), is_trade)
    return journals


@dataclass
class _RawPublication:
    line: int
    pub_id: str
    journal_id: str
    year: int
    doc_type: str
    references: list[str]
    refs_missing: bool
    total_references: int | None


def _parse_publication(rec: Mapping[str, Any]) -> dict[str, Any]:
    refs = rec.get("references")
    if refs is None:
        refs = []
    if not isinstance(refs, list):
        raise ValueError("references must be a list")
    total = rec.get("total_references")
    return dict(
        pub_id=_as_id(rec.get("pub_id"), "pub_id"),
        journal_id=_as_id(rec.get("journal_id"), "journal_id"),
        year=_as_int(rec.get("year"), "year"),
        doc_type=_as_id(rec.get("doc_type"), "doc_type"),
        references=[_as_id(r, "reference") for r in refs],
        refs_missing=_as_flag(rec.get("refs_missing", False), "refs_missing"),
        total_references=None if total is None else _as_int(total, "total_references"),
    )


def ingest(
    journal_records: Iterable[Mapping[str, Any]],
    publication_records: Iterable[Mapping[str, Any]],
    config: IngestConfig,
) -> tuple[Corpus, IngestReport]:
    """Build a corpus from raw records.

    Malformed records are reported with their line number and skipped; a
    duplicated ``pub_id`` raises :class:`DuplicatePublicationError`. Kept
    publications are those of an allow-listed document type, in a known
    journal, with reference data. References are deduplicated, self
    references dropped, and references whose target is not a kept
    publication are counted as unresolved.
    """
    report = IngestReport()
    allow = frozenset(normalize_doc_type(d) for d in config.doc_type_allowlist)
    journals = _parse_journals(journal_records, report)

    raw: dict[str, _RawPublication] = {}
    for line, rec in _numbered(publication_records, first_line=1):
        if ERROR_KEY in rec:
            report.malformed_records += 1
            report.errors.append(RecordError("publications", line, rec[ERROR_KEY]))
            continue
        report.publications_read += 1
        try:
            fields = _parse_publication(rec)
        except ValueError as exc:
            report.malformed_records += 1
            report.errors.append(RecordError("publications", line, str(exc)))
            continue
        pub_id = fields["pub_id"]
        if pub_id in raw:
            raise DuplicatePublicationError(pub_id, (raw[pub_id].line, line))
        raw[pub_id] = _RawPublication(line=line, **fields)

    kept: dict[str, _RawPublication] = {}
    for pub_id, rp in raw.items():
        if rp.journal_id not in journals:
            report.unresolved_journal_dropped += 1
        elif normalize_doc_type(rp.doc_type) not in allow:
            report.doc_type_dropped += 1
        elif rp.refs_missing or not rp.references:
            report.no_references_dropped += 1
        else:
            kept[pub_id] = rp

    publications = []
    for pub_id, rp in kept.items():
        seen: set[str] = set()
        resolved = []
        for ref in rp.references:
            if ref == pub_id:
                report.references_self += 1
            elif ref in seen:
                report.references_duplicate += 1
            else:
                seen.add(ref)
                if ref in kept:
                    resolved.append(ref)
                else:
                    report.references_unresolved += 1
        total = len(seen) if rp.total_references is None else max(rp.total_references, len(resolved))
        report.references_kept += len(resolved)
        publications.append(
            Publication(
                pub_id=pub_id,
                journal_id=rp.journal_id,
                year=rp.year,
                doc_type=normalize_doc_type(rp.doc_type),
                references=tuple(resolved),
                total_references=total,
            )
        )
    report.publications_kept = len(publications)
    corpus = Corpus(config.year_of_analysis, journals.values(), publications, allow)
    return corpus, report


def resolve_merge_map(merge_map: Mapping[str, str]) -> dict[str, str]:
    """Follow rename chains to their final journal; raise on cycles."""
    final: dict[str, str] = {}
    for start in sorted(merge_map):
        path = [start]
        current = start
        while current in merge_map:
            current = merge_map[current]
            if current in path:
                cycle = path[path.index(current):] + [current]
                raise MergeCycleError(cycle)
            if current in final:
                current = final[current]
                break
            path.append(current)
        for node in path:
            if node != current:
                final[node] = current
    return final


def merge_title_changes(corpus: Corpus, merge_map: Mapping[str, str]) -> Corpus:
    """Fold renamed journals into their successors.

    ``merge_map`` maps an old journal id to the id that replaced it; chains
    are followed transitively. Mappings whose old journal is not part of the
    corpus are ignored.
    """
    if not merge_map:
        return corpus
    final = {old: new for old, new in resolve_merge_map(merge_map).items() if old in corpus.journals}
    missing = sorted({new for new in final.values() if new not in corpus.journals})
    if missing:
        raise IngestError(f"merge targets not in corpus: {missing}")

    absorbed: dict[str, list[Journal]] = {}
    for old, new in final.items():
        absorbed.setdefault(new, []).append(corpus.journals[old])

    journals = []
    for jid, journal in corpus.journals.items():
        if jid in final:
            continue
        olds = sorted(absorbed.get(jid, ()), key=lambda j: j.journal_id)
        if olds:
            titles = list(journal.titles)
            preds = list(journal.predecessor_ids)
            for old in olds:
                titles += [t for t in old.titles if t not in titles]
                preds += [p for p in (old.journal_id, *old.predecessor_ids) if p not in preds]
            journal = replace(journal, titles=tuple(titles), predecessor_ids=tuple(sorted(preds)))
        journals.append(journal)

    publications = [
        replace(p, journal_id=final[p.journal_id]) if p.journal_id in final else p
        for p in corpus.publications.values()
    ]
    return corpus.replace(journals=journals, publications=publications)
