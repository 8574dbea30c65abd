"""Journal indicators: RIP, original and revised SNIP, variant normalizations."""

from .base import (
    DEFAULT_MIN_PUBS,
    VARIANT_MODES,
    IndicatorError,
    IndicatorTable,
    JournalScore,
    Mode,
    SubjectField,
    SubjectFieldEntry,
    weighted_mean,
)
from .citations import citing_profile, compute_rip, resolve_citing_set, rip_table, scored_journals
from .compare import (
    ComparisonError,
    ComparisonReport,
    Differences,
    compare_tables,
    derived_factor,
    pearson,
    snip_difference,
)
from .original import (
    database_median_dcp,
    dcp_original,
    median_dcp,
    original_scores,
    original_snip,
    original_table,
    snip_original,
    subject_field_original,
)
from .revised import (
    cohort_active_share,
    dcp_revised,
    revised_table,
    snip_from_weights,
    snip_revised,
    subject_field_revised,
)
from .variants import variant_indicator, variant_table


def build_table(corpus, mode, citing_set=None, min_pubs: int = DEFAULT_MIN_PUBS) -> IndicatorTable:
    """Score every journal with window publications under ``mode``.

    ``citing_set`` is the citing-journal universe (``None``: all journals);
    the original indicator always uses the full database.
    """
    mode = mode if isinstance(mode, Mode) else Mode.parse(mode)
    if mode is Mode.RIP:
        return rip_table(corpus, citing_set, min_pubs)
    if mode is Mode.SNIP_ORIGINAL:
        return original_table(corpus, None, min_pubs)
    if mode is Mode.SNIP_REVISED:
        return revised_table(corpus, citing_set, min_pubs)
    return variant_table(corpus, citing_set, mode, min_pubs)


__all__ = [
    "DEFAULT_MIN_PUBS",
    "VARIANT_MODES",
    "ComparisonError",
    "ComparisonReport",
    "Differences",
    "IndicatorError",
    "IndicatorTable",
    "JournalScore",
    "Mode",
    "SubjectField",
    "SubjectFieldEntry",
    "build_table",
    "citing_profile",
    "cohort_active_share",
    "compare_tables",
    "compute_rip",
    "database_median_dcp",
    "dcp_original",
    "dcp_revised",
    "derived_factor",
    "median_dcp",
    "original_scores",
    "original_snip",
    "original_table",
    "pearson",
    "resolve_citing_set",
    "revised_table",
    "rip_table",
    "scored_journals",
    "snip_difference",
    "snip_from_weights",
    "snip_original",
    "snip_revised",
    "subject_field_original",
    "subject_field_revised",
    "variant_indicator",
    "variant_table",
    "weighted_mean",
]
