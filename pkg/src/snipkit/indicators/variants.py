"""Other source-normalized indicators, on the same ``(3 / m) * sum(w)`` scale.

Each citation from the citing-journal set gets a weight ``w``:

* audience factor: one over the mean active-reference count of the citing
  journal's year-``Y`` cohort (zero-reference publications included);
* fractional counting: one over the citing publication's total reference
  count, regardless of the cited years;
* a priori normalization: one over the citing publication's active
  reference count, without the cohort share correction.

Citations whose weight is undefined are dropped and counted.
"""

from __future__ import annotations

from fractions import Fraction

from ..corpus import Corpus
from .base import (
    DEFAULT_MIN_PUBS,
    VARIANT_MODES,
    IndicatorTable,
    JournalScore,
    Mode,
    score_flags,
)
from .citations import CitingProfile, citing_profile, resolve_citing_set, scored_journals


def _weight(mode: Mode, corpus: Corpus, profile: CitingProfile, citing_id: str) -> Fraction | None:
    if mode is Mode.APRIORI:
        r = profile.active[citing_id]
        return Fraction(1, r) if r else None
    if mode is Mode.FRACTIONAL_COUNTING:
        total = corpus.publications[citing_id].total_references
        return Fraction(1, total) if total else None
    journal = corpus.publications[citing_id].journal_id
    refs = profile.cohort_refs[journal]
    return Fraction(profile.cohort_size[journal], refs) if refs else None


def variant_indicator(
    corpus: Corpus, citing_set, journal_id: str, mode, min_pubs: int = DEFAULT_MIN_PUBS
) -> JournalScore:
    mode = mode if isinstance(mode, Mode) else Mode.parse(mode)
    if mode not in VARIANT_MODES:
        raise ValueError(f"{mode} is not a variant indicator")
    if journal_id not in corpus.journals:
        raise KeyError(f"unknown journal {journal_id!r}")
    citing = resolve_citing_set(corpus, citing_set)
    profile = citing_profile(corpus, citing)
    m = corpus.window_count(journal_id)
    flags = score_flags(journal_id, citing, corpus.journals[journal_id].is_trade, m, min_pubs)

    total = Fraction(0)
    n = dropped = 0
    for citing_id, k in profile.received.get(journal_id, ()):
        w = _weight(mode, corpus, profile, citing_id)
        if w is None:
            dropped += k
            continue
        total += k * w
        n += k
    if dropped:
        flags.add("undefined_weight_dropped")
    if m == 0:
        flags.add("no_window_pubs")
        return JournalScore(journal_id, 0, n, flags=frozenset(flags), dropped=dropped)
    return JournalScore(
        journal_id, m, n, rip=Fraction(n, m), snip=3 * total / m,
        flags=frozenset(flags), dropped=dropped,
    )


def variant_table(corpus: Corpus, citing_set, mode, min_pubs: int = DEFAULT_MIN_PUBS) -> IndicatorTable:
    mode = mode if isinstance(mode, Mode) else Mode.parse(mode)
    citing = resolve_citing_set(corpus, citing_set)
    scores = {j: variant_indicator(corpus, citing, j, mode, min_pubs) for j in scored_journals(corpus)}
    return IndicatorTable(mode, corpus.year_of_analysis, scores, citing_set=citing)
