"""Selection of citing journals.

A journal is a citing journal for year ``Y`` when it is not a trade
journal, published in each of ``Y-3 .. Y``, and at least ``threshold`` of
its year-``Y`` publications have an active reference. Active references
point into ``Y-3 .. Y-1`` of a *citing* journal, so the last rule is
recursive; it is solved by starting from every surviving journal and
dropping journals below threshold until nothing changes. Shares can only
fall as the included set shrinks, so the iteration reaches the greatest
fixed point in at most ``len(journals)`` rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .corpus import Corpus, Publication

DEFAULT_THRESHOLD = 0.20
DEFAULT_MAX_ITERATIONS = 1000


class ExclusionReason(str, Enum):
    TRADE = "trade"
    NOT_CONTINUOUS = "not_continuous"
    BELOW_ACTIVE_THRESHOLD = "below_active_threshold"


class SelectionError(RuntimeError):
    pass


@dataclass(frozen=True)
class CitingJournalSet:
    year_of_analysis: int
    threshold: Fraction
    included: frozenset[str]
    excluded: Mapping[str, ExclusionReason]
    iterations: int
    active_share: Mapping[str, Fraction] = field(default_factory=dict)
    # round in which each below-threshold journal was dropped (1-based)
    exclusion_round: Mapping[str, int] = field(default_factory=dict)

    def __contains__(self, journal_id: str) -> bool:
        return journal_id in self.included

    def to_dict(self) -> dict:
        return {
            "year": self.year_of_analysis,
            "threshold": float(self.threshold),
            "iterations": self.iterations,
            "included": sorted(self.included),
            "excluded": {j: r.value for j, r in sorted(self.excluded.items())},
            "active_share": {j: float(s) for j, s in sorted(self.active_share.items())},
            "exclusion_round": dict(sorted(self.exclusion_round.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "CitingJournalSet":
        return cls(
            year_of_analysis=int(data["year"]),
            threshold=Fraction(str(data["threshold"])),
            included=frozenset(data["included"]),
            excluded={j: ExclusionReason(r) for j, r in data.get("excluded", {}).items()},
            iterations=int(data.get("iterations", 0)),
            active_share={j: Fraction(str(s)) for j, s in data.get("active_share", {}).items()},
            exclusion_round={j: int(k) for j, k in data.get("exclusion_round", {}).items()},
        )


def _as_fraction(threshold) -> Fraction:
    # str() first so 0.2 becomes exactly 1/5 and ties compare exactly
    return threshold if isinstance(threshold, Fraction) else Fraction(str(threshold))


def selection_universe(corpus: Corpus) -> frozenset[str]:
    """Journals able to cite: those with a publication in the year of analysis."""
    return corpus.journals_publishing_in(corpus.year_of_analysis)


def exclude_trade(corpus: Corpus) -> set[str]:
    return {j for j in selection_universe(corpus) if corpus.journals[j].is_trade}


def exclude_noncontinuous(corpus: Corpus) -> set[str]:
    y = corpus.year_of_analysis
    years = range(y - 3, y + 1)
    trade = exclude_trade(corpus)
    return {
        j
        for j in selection_universe(corpus) - trade
        if any(not corpus.pubs_of(j, year) for year in years)
    }


def active_reference_count(pub: Publication, included: Iterable[str], corpus: Corpus) -> int:
    """References of a year-``Y`` publication into ``Y-3 .. Y-1`` of ``included`` journals."""
    if pub.year != corpus.year_of_analysis:
        raise ValueError(
            f"{pub.pub_id!r} is from {pub.year}, not the year of analysis {corpus.year_of_analysis}"
        )
    included = included if isinstance(included, (set, frozenset)) else set(included)
    return sum(1 for j in corpus.window_targets(pub.pub_id) if j in included)


def active_share(corpus: Corpus, journal_id: str, included: Iterable[str]) -> Fraction:
    """Share of ``journal_id``'s year-``Y`` publications with an active reference."""
    cohort = corpus.pubs_of(journal_id, corpus.year_of_analysis)
    if not cohort:
        raise ValueError(f"journal {journal_id!r} has no publications in {corpus.year_of_analysis}")
    included = frozenset(included)
    active = sum(1 for p in cohort if any(j in included for j in corpus.window_targets(p.pub_id)))
    return Fraction(active, len(cohort))


def selection_round(
    corpus: Corpus, included: Iterable[str], threshold=DEFAULT_THRESHOLD
) -> tuple[frozenset[str], dict[str, Fraction]]:
    """One update: keep the journals of ``included`` whose share reaches ``threshold``."""
    included = frozenset(included)
    t = _as_fraction(threshold)
    shares = {j: active_share(corpus, j, included) for j in sorted(included)}
    return frozenset(j for j, s in shares.items() if s >= t), shares


def select_citing_journals(
    corpus: Corpus,
    threshold=DEFAULT_THRESHOLD,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> CitingJournalSet:
    t = _as_fraction(threshold)
    if not 0 < t <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")

    excluded: dict[str, ExclusionReason] = {}
    for j in exclude_trade(corpus):
        excluded[j] = ExclusionReason.TRADE
    for j in exclude_noncontinuous(corpus):
        excluded[j] = ExclusionReason.NOT_CONTINUOUS
    candidates = selection_universe(corpus) - excluded.keys()

    included = frozenset(candidates)
    rounds: dict[str, int] = {}
    iterations = 0
    while included:
        iterations += 1
        if iterations > max_iterations:
            raise SelectionError(f"no stable citing-journal set after {max_iterations} rounds")
        kept, _ = selection_round(corpus, included, t)
        dropped = included - kept
        if not dropped:
            break
        for j in dropped:
            excluded[j] = ExclusionReason.BELOW_ACTIVE_THRESHOLD
            rounds[j] = iterations
        included = kept

    shares = {j: active_share(corpus, j, included) for j in sorted(candidates)}
    return CitingJournalSet(
        year_of_analysis=corpus.year_of_analysis,
        threshold=t,
        included=included,
        excluded=dict(sorted(excluded.items())),
        iterations=iterations,
        active_share=shares,
        exclusion_round=dict(sorted(rounds.items())),
    )


def load_selection(path) -> CitingJournalSet:
    with open(path, encoding="utf-8") as fh:
        return CitingJournalSet.from_dict(json.load(fh))
