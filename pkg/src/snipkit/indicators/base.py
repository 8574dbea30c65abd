"""Score containers shared by every indicator family."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

Ratio = Optional[Fraction]

DEFAULT_MIN_PUBS = 100


class Mode(str, Enum):
    RIP = "rip"
    SNIP_ORIGINAL = "snip_original"
    SNIP_REVISED = "snip_revised"
    AUDIENCE_FACTOR = "audience_factor"
    FRACTIONAL_COUNTING = "fractional_counting"
    APRIORI = "apriori"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls(text.strip().lower().replace("-", "_"))
        except ValueError:
            choices = ", ".join(m.value.replace("_", "-") for m in cls)
            raise ValueError(f"unknown mode {text!r} (choose from {choices})") from None


VARIANT_MODES = (Mode.AUDIENCE_FACTOR, Mode.FRACTIONAL_COUNTING, Mode.APRIORI)


class IndicatorError(ValueError):
    pass


@dataclass(frozen=True)
class SubjectFieldEntry:
    """A citing publication as seen from the cited journal.

    ``r`` is the citing publication's active-reference count, ``p`` the
    active share of its journal's year-``Y`` cohort (``None`` in original
    mode) and ``multiplicity`` the number of its references into the cited
    journal's window (always 1 in original mode).
    """

    citing_pub_id: str
    r: int
    p: Ratio = None
    multiplicity: int = 1


@dataclass(frozen=True)
class SubjectField:
    journal_id: str
    entries: tuple[SubjectFieldEntry, ...]
    # citations excluded because the citing publication has no active reference
    zero_active_dropped: int = 0

    @property
    def n(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def __iter__(self) -> Iterator[SubjectFieldEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class JournalScore:
    journal_id: str
    m: int
    n: int
    rip: Ratio = None
    dcp: Ratio = None
    rdcp: Ratio = None
    snip: Ratio = None
    flags: frozenset[str] = frozenset()
    dropped: int = 0

    @property
    def defined(self) -> bool:
        return self.snip is not None


@dataclass(frozen=True)
class IndicatorTable:
    mode: Mode
    year_of_analysis: Optional[int]
    scores: Mapping[str, JournalScore]
    median_dcp: Ratio = None
    notes: str = ""
    citing_set: frozenset[str] = field(default_factory=frozenset)

    def __getitem__(self, journal_id: str) -> JournalScore:
        return self.scores[journal_id]

    def __contains__(self, journal_id: str) -> bool:
        return journal_id in self.scores

    def __len__(self) -> int:
        return len(self.scores)

    def snip(self, journal_id: str) -> Ratio:
        return self.scores[journal_id].snip

    @property
    def weighted_mean_snip(self) -> Ratio:
        return weighted_mean(self.scores.values())

    def weighted_mean_over(self, journal_ids: Iterable[str]) -> Ratio:
        return weighted_mean(self.scores[j] for j in journal_ids if j in self.scores)


def weighted_mean(scores: Iterable[JournalScore]) -> Ratio:
    """Publication-weighted mean score ``sum(m * snip) / sum(m)`` over defined scores."""
    total = Fraction(0)
    weight = 0
    for s in scores:
        if s.snip is not None and s.m > 0:
            total += s.m * s.snip
            weight += s.m
    return total / weight if weight else None


def score_flags(journal_id: str, citing_set, is_trade: bool, m: int, min_pubs: int) -> set[str]:
    flags = set()
    if journal_id in citing_set:
        flags.add("citing")
    if is_trade:
        flags.add("trade")
    if m < min_pubs:
        flags.add("below_min_pub")
    return flags
