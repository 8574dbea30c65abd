"""The revised SNIP indicator.

DCP is one third of the harmonic mean of ``p * r`` over a journal's
citations, where ``r`` is the citing publication's active-reference count
(against the citing-journal set) and ``p`` the share of its journal's
year-``Y`` publications having any active reference. A publication citing
the journal ``k`` times contributes ``k`` entries. Written out,
``SNIP = RIP / DCP = (3 / m) * sum(1 / (p * r))``, so every citation adds
``3 / (m p r)`` to the score.

Citations from publications with ``r = 0`` have no defined weight; they are
left out of both ``n`` and the DCP sum and reported in ``dropped``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from ..corpus import Corpus
from ..selection import active_share
from .base import (
    DEFAULT_MIN_PUBS,
    IndicatorTable,
    JournalScore,
    Mode,
    Ratio,
    SubjectField,
    SubjectFieldEntry,
    score_flags,
)
from .citations import citing_profile, resolve_citing_set, scored_journals

THIRD = Fraction(1, 3)


def cohort_active_share(corpus: Corpus, citing_set, journal_id: str, year: int | None = None) -> Fraction:
    if year is not None and year != corpus.year_of_analysis:
        raise ValueError(f"cohorts are defined for the year of analysis, not {year}")
    citing = resolve_citing_set(corpus, citing_set)
    if journal_id not in citing:
        # cohort statistics are only tracked for citing journals
        return active_share(corpus, journal_id, citing)
    return citing_profile(corpus, citing).share(journal_id)


def subject_field_revised(corpus: Corpus, citing_set, journal_id: str) -> SubjectField:
    if journal_id not in corpus.journals:
        raise KeyError(f"unknown journal {journal_id!r}")
    profile = citing_profile(corpus, citing_set)
    pubs = corpus.publications
    entries = []
    dropped = 0
    for citing_id, k in profile.received.get(journal_id, ()):
        r = profile.active[citing_id]
        if r == 0:
            dropped += k
            continue
        p = profile.share(pubs[citing_id].journal_id)
        entries.append(SubjectFieldEntry(citing_id, r, p, k))
    return SubjectField(journal_id, tuple(entries), dropped)


def _inverse_weight_sum(entries: Iterable[SubjectFieldEntry]) -> Fraction:
    return sum((Fraction(e.multiplicity) / (e.p * e.r) for e in entries), Fraction(0))


def dcp_revised(entries: Iterable[SubjectFieldEntry]) -> Ratio:
    entries = list(entries)
    n = sum(e.multiplicity for e in entries)
    if n == 0:
        return None
    for e in entries:
        if e.r < 1 or e.p is None or e.p <= 0:
            raise ValueError(f"entry {e.citing_pub_id!r} needs r >= 1 and p > 0")
    return THIRD * n / _inverse_weight_sum(entries)


def snip_from_weights(m: int, entries: Iterable[SubjectFieldEntry]) -> Fraction:
    """``(3 / m) * sum(multiplicity / (p r))``, the per-citation form of revised SNIP."""
    if m <= 0:
        raise ValueError("m must be positive")
    return 3 * _inverse_weight_sum(entries) / m


def snip_revised(
    corpus: Corpus, citing_set, journal_id: str, min_pubs: int = DEFAULT_MIN_PUBS
) -> JournalScore:
    citing = resolve_citing_set(corpus, citing_set)
    field = subject_field_revised(corpus, citing, journal_id)
    m = corpus.window_count(journal_id)
    flags = score_flags(journal_id, citing, corpus.journals[journal_id].is_trade, m, min_pubs)
    if field.zero_active_dropped:
        flags.add("zero_active_dropped")
    n = field.n
    if m == 0:
        flags.add("no_window_pubs")
        return JournalScore(journal_id, 0, n, flags=frozenset(flags), dropped=field.zero_active_dropped)
    rip = Fraction(n, m)
    dcp = dcp_revised(field)
    snip = rip / dcp if dcp is not None else Fraction(0)
    return JournalScore(
        journal_id, m, n, rip=rip, dcp=dcp, snip=snip,
        flags=frozenset(flags), dropped=field.zero_active_dropped,
    )


def revised_table(corpus: Corpus, citing_set, min_pubs: int = DEFAULT_MIN_PUBS) -> IndicatorTable:
    citing = resolve_citing_set(corpus, citing_set)
    scores = {j: snip_revised(corpus, citing, j, min_pubs) for j in scored_journals(corpus)}
    return IndicatorTable(
        Mode.SNIP_REVISED,
        corpus.year_of_analysis,
        scores,
        notes=f"{len(citing)} citing journals",
        citing_set=citing,
    )
