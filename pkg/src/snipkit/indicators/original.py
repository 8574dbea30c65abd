"""The original SNIP indicator: RIP divided by the relative database citation potential.

The subject field of a journal is the *set* of year-``Y`` publications
citing it anywhere in ``Y-8 .. Y-1``. Its DCP is the arithmetic mean of
their active-reference counts, where a reference is active when it points
into ``Y-3 .. Y-1`` of any database journal. RDCP divides DCP by the median
DCP over all journals with a non-empty subject field.
"""

from __future__ import annotations

import statistics
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from ..corpus import Corpus
from .base import (
    DEFAULT_MIN_PUBS,
    IndicatorError,
    IndicatorTable,
    JournalScore,
    Mode,
    Ratio,
    SubjectField,
    SubjectFieldEntry,
    score_flags,
)
from .citations import citation_count, resolve_citing_set, scored_journals


def _build_fields(corpus: Corpus, universe: frozenset[str]) -> dict[str, SubjectField]:
    pubs = corpus.publications
    extended = set(corpus.extended_window)
    entries: dict[str, list[SubjectFieldEntry]] = defaultdict(list)
    for pub in corpus.citing_publications():
        if pub.journal_id not in universe:
            continue
        r = sum(1 for j in corpus.window_targets(pub.pub_id) if j in universe)
        cited = {
            pubs[ref].journal_id
            for ref in pub.references
            if pubs[ref].year in extended
        }
        for j in sorted(cited):
            entries[j].append(SubjectFieldEntry(pub.pub_id, r))
    return {j: SubjectField(j, tuple(v)) for j, v in entries.items()}


def _fields(corpus: Corpus, universe) -> dict[str, SubjectField]:
    universe = resolve_citing_set(corpus, universe)
    return corpus.memo(("original_fields", universe), lambda: _build_fields(corpus, universe))


def subject_field_original(corpus: Corpus, journal_id: str, universe=None) -> SubjectField:
    """Distinct year-``Y`` publications citing ``journal_id`` within eight years.

    ``universe`` (default: all journals) restricts both the citing
    publications and the journals whose window counts toward ``r``.
    """
    if journal_id not in corpus.journals:
        raise KeyError(f"unknown journal {journal_id!r}")
    return _fields(corpus, universe).get(journal_id, SubjectField(journal_id, ()))


def dcp_original(entries: Iterable[SubjectFieldEntry]) -> Ratio:
    entries = list(entries)
    if not entries:
        return None
    return Fraction(sum(e.r for e in entries), len(entries))


def median_dcp(dcps: Iterable[Ratio]) -> Ratio:
    """Median of the defined DCP values; even counts average the two middle values."""
    values = sorted(d for d in dcps if d is not None)
    if not values:
        return None
    return Fraction(statistics.median(values))


def original_snip(rip: Ratio, dcp: Ratio, median: Ratio) -> tuple[Ratio, Ratio]:
    """Return ``(rdcp, snip)`` with ``rdcp = dcp / median`` and ``snip = rip / rdcp``."""
    if median is not None and median == 0:
        raise IndicatorError("median DCP is zero; corpus has no active references")
    if rip is None or dcp is None or median is None:
        return None, None
    rdcp = dcp / median
    if rdcp == 0:
        return rdcp, None
    return rdcp, rip / rdcp


def database_median_dcp(corpus: Corpus, universe=None) -> Ratio:
    return median_dcp(dcp_original(f) for f in _fields(corpus, universe).values())


def snip_original(
    corpus: Corpus,
    journal_id: str,
    universe=None,
    median: Ratio = None,
    min_pubs: int = DEFAULT_MIN_PUBS,
) -> JournalScore:
    universe = resolve_citing_set(corpus, universe)
    if median is None:
        median = database_median_dcp(corpus, universe)
        if median is None:
            raise IndicatorError("no journal has a defined DCP")
    m = corpus.window_count(journal_id)
    n = citation_count(corpus, universe, journal_id)
    field = subject_field_original(corpus, journal_id, universe)
    dcp = dcp_original(field)
    flags = score_flags(journal_id, universe, corpus.journals[journal_id].is_trade, m, min_pubs)
    if m == 0:
        return JournalScore(journal_id, 0, n, dcp=dcp, flags=frozenset(flags | {"no_window_pubs"}))
    rip = Fraction(n, m)
    rdcp, snip = original_snip(rip, dcp, median)
    if snip is None:
        flags.add("undefined_dcp" if dcp is None else "zero_dcp")
    return JournalScore(journal_id, m, n, rip=rip, dcp=dcp, rdcp=rdcp, snip=snip, flags=frozenset(flags))


def original_table(corpus: Corpus, universe=None, min_pubs: int = DEFAULT_MIN_PUBS) -> IndicatorTable:
    universe = resolve_citing_set(corpus, universe)
    median = database_median_dcp(corpus, universe)
    if median is None:
        raise IndicatorError("no journal has a defined DCP")
    scores = {
        j: snip_original(corpus, j, universe, median, min_pubs) for j in scored_journals(corpus)
    }
    return IndicatorTable(
        Mode.SNIP_ORIGINAL,
        corpus.year_of_analysis,
        scores,
        median_dcp=median,
        notes="active references counted against all database journals",
        citing_set=universe,
    )


def original_scores(
    rip: Mapping[str, Fraction], dcp: Mapping[str, Optional[Fraction]]
) -> dict[str, Ratio]:
    """Original SNIP from precomputed RIP and DCP values (median over ``dcp``)."""
    median = median_dcp(dcp.values())
    return {j: original_snip(rip[j], dcp.get(j), median)[1] for j in rip}
