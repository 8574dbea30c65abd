"""Core citation data model: journals, publications and the resolved corpus."""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

DEFAULT_DOC_TYPES = frozenset({"article", "conference paper", "review"})

CITED_WINDOW_YEARS = 3
EXTENDED_WINDOW_YEARS = 8


def normalize_doc_type(doc_type: str) -> str:
    """Lower-case a document type and treat ``_``/``-`` as spaces."""
    cleaned = doc_type.replace("_", " ").replace("-", " ").lower()
    return " ".join(cleaned.split())


class CorpusError(ValueError):
    """Raised when a corpus would violate one of its structural invariants."""


@dataclass(frozen=True)
class Journal:
    journal_id: str
    titles: tuple[str, ...] = ()
    is_trade: bool = False
    predecessor_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Publication:
    pub_id: str
    journal_id: str
    year: int
    doc_type: str = "article"
    references: tuple[str, ...] = ()
    has_reference_data: bool = True
    # distinct raw references, resolved or not; fractional counting divides by this
    total_references: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "references", tuple(self.references))
        if self.total_references is None:
            object.__setattr__(self, "total_references", len(self.references))
        elif self.total_references < len(self.references):
            raise CorpusError(
                f"publication {self.pub_id!r}: total_references "
                f"{self.total_references} < {len(self.references)} resolved references"
            )


class CitationEvent(NamedTuple):
    """One reference from a year-of-analysis publication to a cited publication."""

    citing_pub_id: str
    cited_pub_id: str


class Corpus:
    """Immutable, indexed citation dataset for a single year of analysis.

    The citing window is the year of analysis ``Y`` alone. Indicator math
    looks at cited publications from ``Y-3 .. Y-1``; the original subject
    field definition reaches back to ``Y-8``.

    Construction validates every invariant: unique ids, allow-listed
    document types, publications with reference data only, and references
    that resolve to publications inside the corpus (no self references, no
    duplicates).
    """

    __slots__ = (
        "_year",
        "_journals",
        "_publications",
        "_allowlist",
        "_by_journal_year",
        "_citing",
        "_cited_by",
        "_window_targets",
        "_digest",
        "_cache",
    )

    def __init__(
        self,
        year_of_analysis: int,
        journals: Iterable[Journal] = (),
        publications: Iterable[Publication] = (),
        doc_type_allowlist: Iterable[str] = DEFAULT_DOC_TYPES,
    ) -> None:
        self._year = int(year_of_analysis)
        self._allowlist = frozenset(normalize_doc_type(d) for d in doc_type_allowlist)

        journal_map: dict[str, Journal] = {}
        for journal in journals:
            if journal.journal_id in journal_map:
                raise CorpusError(f"duplicate journal_id {journal.journal_id!r}")
            journal_map[journal.journal_id] = journal
        predecessors = {p for j in journal_map.values() for p in j.predecessor_ids}
        clash = sorted(predecessors & journal_map.keys())
        if clash:
            raise CorpusError(f"journals listed both as predecessor and standalone: {clash}")

        pub_map: dict[str, Publication] = {}
        for pub in publications:
            if pub.pub_id in pub_map:
                raise CorpusError(f"duplicate pub_id {pub.pub_id!r}")
            if pub.journal_id not in journal_map:
                raise CorpusError(f"publication {pub.pub_id!r} has unknown journal {pub.journal_id!r}")
            if normalize_doc_type(pub.doc_type) not in self._allowlist:
                raise CorpusError(f"publication {pub.pub_id!r} has excluded doc_type {pub.doc_type!r}")
            if not pub.has_reference_data:
                raise CorpusError(f"publication {pub.pub_id!r} has no reference data")
            pub_map[pub.pub_id] = pub

        for pub in pub_map.values():
            if len(set(pub.references)) != len(pub.references):
                raise CorpusError(f"publication {pub.pub_id!r} lists a reference twice")
            for ref in pub.references:
                if ref == pub.pub_id:
                    raise CorpusError(f"publication {pub.pub_id!r} references itself")
                if ref not in pub_map:
                    raise CorpusError(f"publication {pub.pub_id!r} references unknown {ref!r}")

        self._journals = MappingProxyType(dict(sorted(journal_map.items())))
        self._publications = MappingProxyType(dict(sorted(pub_map.items())))
        self._build_indices()
        self._digest: str | None = None
        self._cache: dict = {}

    def _build_indices(self) -> None:
        by_journal_year: dict[tuple[str, int], list[str]] = defaultdict(list)
        for pub in self._publications.values():
            by_journal_year[(pub.journal_id, pub.year)].append(pub.pub_id)
        self._by_journal_year = {k: tuple(v) for k, v in by_journal_year.items()}

        window = set(self.cited_window)
        citing = tuple(p.pub_id for p in self._publications.values() if p.year == self._year)
        cited_by: dict[str, list[str]] = defaultdict(list)
        window_targets: dict[str, tuple[str, ...]] = {}
        for pub_id in citing:
            targets = []
            for ref in self._publications[pub_id].references:
                cited_by[ref].append(pub_id)
                target = self._publications[ref]
                if target.year in window:
                    targets.append(target.journal_id)
            window_targets[pub_id] = tuple(targets)
        self._citing = citing
        self._cited_by = {k: tuple(v) for k, v in cited_by.items()}
        self._window_targets = window_targets

    # -- basic accessors -------------------------------------------------

    @property
    def year_of_analysis(self) -> int:
        return self._year

    @property
    def journals(self) -> Mapping[str, Journal]:
        return self._journals

    @property
    def publications(self) -> Mapping[str, Publication]:
        return self._publications

    @property
    def doc_type_allowlist(self) -> frozenset[str]:
        return self._allowlist

    @property
    def cited_window(self) -> tuple[int, ...]:
        return tuple(range(self._year - CITED_WINDOW_YEARS, self._year))

    @property
    def extended_window(self) -> tuple[int, ...]:
        return tuple(range(self._year - EXTENDED_WINDOW_YEARS, self._year))

    # -- indices ---------------------------------------------------------

    def pubs_of(self, journal_id: str, year: int) -> tuple[Publication, ...]:
        ids = self._by_journal_year.get((journal_id, year), ())
        return tuple(self._publications[i] for i in ids)

    def window_pubs(self, journal_id: str) -> tuple[Publication, ...]:
        """Publications of ``journal_id`` in the three years before ``Y``."""
        return tuple(p for y in self.cited_window for p in self.pubs_of(journal_id, y))

    def window_count(self, journal_id: str) -> int:
        return sum(len(self._by_journal_year.get((journal_id, y), ())) for y in self.cited_window)

    def citing_publications(self) -> tuple[Publication, ...]:
        """All publications of the year of analysis, ordered by pub_id."""
        return tuple(self._publications[i] for i in self._citing)

    def cited_by(self, pub_id: str) -> tuple[str, ...]:
        """Year-``Y`` publications that reference ``pub_id``."""
        return self._cited_by.get(pub_id, ())

    def window_targets(self, pub_id: str) -> tuple[str, ...]:
        """Journal of every reference from a year-``Y`` publication into ``Y-3 .. Y-1``.

        One entry per reference, so a journal appears as often as it is cited.
        """
        try:
            return self._window_targets[pub_id]
        except KeyError:
            raise KeyError(f"{pub_id!r} is not a publication of year {self._year}") from None

    def journals_publishing_in(self, year: int) -> frozenset[str]:
        return frozenset(j for (j, y) in self._by_journal_year if y == year)

    # -- identity ----------------------------------------------------------

    def canonical_dict(self) -> dict:
        return {
            "year_of_analysis": self._year,
            "doc_type_allowlist": sorted(self._allowlist),
            "journals": [
                [j.journal_id, list(j.titles), j.is_trade, list(j.predecessor_ids)]
                for j in self._journals.values()
            ],
            "publications": [
                [p.pub_id, p.journal_id, p.year, normalize_doc_type(p.doc_type),
                 list(p.references), p.total_references]
                for p in self._publications.values()
            ],
        }

    def digest(self) -> str:
        """SHA-256 of the canonical serialization; equal corpora share a digest."""
        if self._digest is None:
            payload = json.dumps(self.canonical_dict(), separators=(",", ":"), ensure_ascii=False)
            self._digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        return self._digest

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.digest() == other.digest()

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        return (
            f"Corpus(year={self._year}, journals={len(self._journals)}, "
            f"publications={len(self._publications)})"
        )

    def replace(
        self,
        journals: Iterable[Journal] | None = None,
        publications: Iterable[Publication] | None = None,
    ) -> "Corpus":
        return Corpus(
            self._year,
            self._journals.values() if journals is None else journals,
            self._publications.values() if publications is None else publications,
            self._allowlist,
        )

    def memo(self, key, factory):
        """Per-corpus memo for derived, immutable aggregates."""
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = factory()
            return value


def citations_received(
    corpus: Corpus, journal_id: str, from_journals: Iterable[str] | None = None
) -> list[CitationEvent]:
    """Citation events from year ``Y`` into ``journal_id``'s ``Y-3 .. Y-1`` output.

    ``from_journals=None`` counts citations from every journal in the corpus.
    A citing publication with ``k`` qualifying references yields ``k`` events.
    """
    if journal_id not in corpus.journals:
        raise KeyError(f"unknown journal {journal_id!r}")
    sources = None if from_journals is None else frozenset(from_journals)
    pubs = corpus.publications
    events = []
    for cited in corpus.window_pubs(journal_id):
        for citing_id in corpus.cited_by(cited.pub_id):
            if sources is None or pubs[citing_id].journal_id in sources:
                events.append(CitationEvent(citing_id, cited.pub_id))
    events.sort()
    return events


__all__ = [
    "CITED_WINDOW_YEARS",
    "DEFAULT_DOC_TYPES",
    "EXTENDED_WINDOW_YEARS",
    "CitationEvent",
    "Corpus",
    "CorpusError",
    "Journal",
    "Publication",
    "citations_received",
    "normalize_doc_type",
]
