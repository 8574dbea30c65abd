"""Citing-side aggregates and raw impact per paper.

Everything the source-normalized indicators need is derived in a single
pass over the year-of-analysis publications of the citing journals: each
publication's active-reference count, each cohort's active share, and the
citations every cited journal receives grouped by citing publication.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from ..corpus import Corpus
from .base import DEFAULT_MIN_PUBS, IndicatorTable, JournalScore, Mode, Ratio, score_flags


@dataclass(frozen=True)
class CitingProfile:
    citing_set: frozenset[str]
    # active-reference count of every year-Y publication of a citing journal
    active: Mapping[str, int]
    cohort_size: Mapping[str, int]
    cohort_active: Mapping[str, int]
    cohort_refs: Mapping[str, int]
    # cited journal -> ((citing pub, references into the journal's window), ...)
    received: Mapping[str, tuple[tuple[str, int], ...]]

    def share(self, journal_id: str) -> Fraction:
        size = self.cohort_size.get(journal_id, 0)
        if not size:
            raise ValueError(f"journal {journal_id!r} has no citing publications in the year of analysis")
        return Fraction(self.cohort_active[journal_id], size)


def resolve_citing_set(corpus: Corpus, citing_set: Optional[Iterable[str]]) -> frozenset[str]:
    """``None`` means every journal in the corpus."""
    if citing_set is None:
        return frozenset(corpus.journals)
    if hasattr(citing_set, "included"):
        return frozenset(citing_set.included)
    return frozenset(citing_set)


def _build_profile(corpus: Corpus, citing: frozenset[str]) -> CitingProfile:
    active: dict[str, int] = {}
    size: Counter = Counter()
    n_active: Counter = Counter()
    refs: Counter = Counter()
    received: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for pub in corpus.citing_publications():
        if pub.journal_id not in citing:
            continue
        targets = corpus.window_targets(pub.pub_id)
        r = sum(1 for j in targets if j in citing)
        active[pub.pub_id] = r
        size[pub.journal_id] += 1
        refs[pub.journal_id] += r
        if r:
            n_active[pub.journal_id] += 1
        for cited, k in sorted(Counter(targets).items()):
            received[cited].append((pub.pub_id, k))
    return CitingProfile(
        citing_set=citing,
        active=active,
        cohort_size=dict(size),
        cohort_active={j: n_active[j] for j in size},
        cohort_refs={j: refs[j] for j in size},
        received={j: tuple(v) for j, v in received.items()},
    )


def citing_profile(corpus: Corpus, citing_set: Optional[Iterable[str]] = None) -> CitingProfile:
    citing = resolve_citing_set(corpus, citing_set)
    return corpus.memo(("citing_profile", citing), lambda: _build_profile(corpus, citing))


def citation_count(corpus: Corpus, citing_set, journal_id: str) -> int:
    if journal_id not in corpus.journals:
        raise KeyError(f"unknown journal {journal_id!r}")
    profile = citing_profile(corpus, citing_set)
    return sum(k for _, k in profile.received.get(journal_id, ()))


def compute_rip(corpus: Corpus, citing_set, journal_id: str) -> Ratio:
    """Citations from ``citing_set`` per ``Y-3 .. Y-1`` publication; ``None`` when m = 0."""
    m = corpus.window_count(journal_id)
    if m == 0:
        return None
    return Fraction(citation_count(corpus, citing_set, journal_id), m)


def scored_journals(corpus: Corpus) -> list[str]:
    """Journals with at least one publication in the cited window."""
    return [j for j in corpus.journals if corpus.window_count(j) > 0]


def rip_table(corpus: Corpus, citing_set=None, min_pubs: int = DEFAULT_MIN_PUBS) -> IndicatorTable:
    citing = resolve_citing_set(corpus, citing_set)
    scores = {}
    for j in scored_journals(corpus):
        m = corpus.window_count(j)
        n = citation_count(corpus, citing, j)
        rip = Fraction(n, m)
        flags = score_flags(j, citing, corpus.journals[j].is_trade, m, min_pubs)
        # the RIP family reports RIP as its score column
        scores[j] = JournalScore(j, m, n, rip=rip, snip=rip, flags=frozenset(flags))
    return IndicatorTable(Mode.RIP, corpus.year_of_analysis, scores, citing_set=citing)
