"""Comparing two indicator tables: correlation, weighted means, differences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .base import DEFAULT_MIN_PUBS, IndicatorError, IndicatorTable, weighted_mean


class ComparisonError(IndicatorError):
    pass


def pearson(xs: list[float], ys: list[float]) -> float:
    """Pearson product-moment correlation of two equally long samples."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ComparisonError("need two samples of equal length >= 2")
    mx = math.fsum(xs) / len(xs)
    my = math.fsum(ys) / len(ys)
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise ComparisonError("correlation undefined for a constant sample")
    return math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)


@dataclass(frozen=True)
class ComparisonReport:
    n_common: int
    min_pubs: int
    correlation: float
    mean_a: float
    mean_b: float
    mean_ratio: float
    pairs: list[tuple[str, float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n_common": self.n_common,
            "min_pubs": self.min_pubs,
            "correlation": self.correlation,
            "weighted_mean_a": self.mean_a,
            "weighted_mean_b": self.mean_b,
            "mean_ratio": self.mean_ratio,
            "scatter": [{"journal_id": j, "a": a, "b": b} for j, a, b in self.pairs],
        }


def common_journals(a: IndicatorTable, b: IndicatorTable, min_pubs: int = 0) -> list[str]:
    return sorted(
        j
        for j, sa in a.scores.items()
        if j in b.scores
        and sa.snip is not None
        and b.scores[j].snip is not None
        and min(sa.m, b.scores[j].m) >= min_pubs
    )


def compare_tables(
    a: IndicatorTable, b: IndicatorTable, min_pubs: int = DEFAULT_MIN_PUBS
) -> ComparisonReport:
    """Correlate two tables over the journals both score with at least ``min_pubs`` publications."""
    if a.year_of_analysis is not None and b.year_of_analysis is not None:
        if a.year_of_analysis != b.year_of_analysis:
            raise ComparisonError(
                f"tables are for different years ({a.year_of_analysis} vs {b.year_of_analysis})"
            )
    journals = common_journals(a, b, min_pubs)
    if len(journals) < 2:
        raise ComparisonError(f"only {len(journals)} common journal(s) with >= {min_pubs} publications")
    xs = [float(a.scores[j].snip) for j in journals]
    ys = [float(b.scores[j].snip) for j in journals]
    mean_a = weighted_mean(a.scores[j] for j in journals)
    mean_b = weighted_mean(b.scores[j] for j in journals)
    return ComparisonReport(
        n_common=len(journals),
        min_pubs=min_pubs,
        correlation=pearson(xs, ys),
        mean_a=float(mean_a),
        mean_b=float(mean_b),
        mean_ratio=float(mean_a / mean_b) if mean_b else math.nan,
        pairs=list(zip(journals, xs, ys)),
    )


@dataclass(frozen=True)
class Differences:
    factor: Fraction
    values: dict[str, Fraction]
    skipped: int

    def top(self, n: int = 10) -> tuple[list[tuple[str, Fraction]], list[tuple[str, Fraction]]]:
        """Largest positive and largest negative differences, ``n`` each."""
        ranked = sorted(self.values.items(), key=lambda kv: (-kv[1], kv[0]))
        positive = [kv for kv in ranked if kv[1] > 0][:n]
        negative = sorted((kv for kv in ranked if kv[1] < 0), key=lambda kv: (kv[1], kv[0]))[:n]
        return positive, negative


def derived_factor(revised: IndicatorTable, original: IndicatorTable) -> Fraction:
    """Ratio of the publication-weighted mean original score to the revised one."""
    mo, mr = original.weighted_mean_snip, revised.weighted_mean_snip
    if not mo or not mr:
        raise ComparisonError("weighted mean score undefined or zero; pass an explicit factor")
    return mo / mr


def snip_difference(
    revised: IndicatorTable,
    original: IndicatorTable,
    factor: Optional[Fraction | float | str] = None,
    min_pubs: int = 0,
) -> Differences:
    """``revised - original / factor`` per journal scored in both tables."""
    if factor is None:
        factor = derived_factor(revised, original)
    factor = Fraction(str(factor)) if isinstance(factor, float) else Fraction(factor)
    if factor <= 0:
        raise ComparisonError("difference factor must be positive")
    keep = set(common_journals(revised, original, min_pubs))
    universe = set(revised.scores) | set(original.scores)
    values = {j: revised.snip(j) - original.snip(j) / factor for j in sorted(keep)}
    return Differences(factor, values, skipped=len(universe - keep))
