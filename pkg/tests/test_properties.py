"""Randomized invariants checked with hypothesis."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from snipkit.corpus import (
    IngestConfig,
    Journal,
    citations_received,
    ingest,
    merge_title_changes,
)
from snipkit.indicators import (
    median_dcp,
    original_scores,
    original_table,
    revised_table,
    snip_from_weights,
    snip_revised,
    subject_field_revised,
)
from snipkit.selection import select_citing_journals, selection_round

from builders import Y, CorpusBuilder, random_corpus

seeds = st.integers(0, 2**32 - 1)
positive = st.fractions(min_value=Fraction(1, 100), max_value=100)


def with_extra_citation(corpus, journal_id, k, r):
    """Add a citing journal whose k analysis-year papers include one citing ``journal_id``.

    The new journal's share is 1/k and the citing paper carries r active
    references: one to ``journal_id`` and r - 1 into its own window.
    """
    b = CorpusBuilder()
    b.journals = dict(corpus.journals)
    b.pubs = list(corpus.publications.values())
    jid = b.journal("NEW")
    own = b.window(jid, (max(1, r - 1), 1, 1))
    target = corpus.window_pubs(journal_id)[0].pub_id
    b.pub(jid, Y, [target, *own[: r - 1]])
    old = b.pub(jid, 2004)
    for _ in range(k - 1):
        b.pub(jid, Y, [old])
    return b.build()


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 20))
def test_extra_citation_raises_revised_score_by_exact_weight(seed, k, r):
    rng = random.Random(seed)
    corpus = random_corpus(rng)
    jid = rng.choice(sorted(corpus.journals))
    before = snip_revised(corpus, None, jid, min_pubs=0)
    after = snip_revised(with_extra_citation(corpus, jid, k, r), None, jid, min_pubs=0)
    p = Fraction(1, k)
    assert after.snip - before.snip == 3 / (before.m * p * r)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_merged_score_is_publication_weighted_average(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    a, b = rng.sample([f"J{k}" for k in range(n)], 2)
    corpus = random_corpus(rng, n, all_active=(a, b))
    table = revised_table(corpus, None, min_pubs=0)
    sa, sb = table[a], table[b]
    merged_corpus = merge_title_changes(
        corpus.replace(journals=[*corpus.journals.values(), Journal("AB")]), {a: "AB", b: "AB"}
    )
    merged = snip_revised(merged_corpus, None, "AB", min_pubs=0).snip
    assert merged == (sa.m * sa.snip + sb.m * sb.snip) / (sa.m + sb.m)
    assert min(sa.snip, sb.snip) <= merged <= max(sa.snip, sb.snip)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_ratio_and_weight_routes_agree(seed):
    corpus = random_corpus(random.Random(seed))
    citing = select_citing_journals(corpus).included
    for jid, score in revised_table(corpus, citing, min_pubs=0).scores.items():
        field = subject_field_revised(corpus, citing, jid)
        assert snip_from_weights(score.m, field) == score.snip


@given(st.dictionaries(st.sampled_from("ABCDEFGH"), positive, min_size=1), positive)
def test_original_ratios_survive_common_dcp_scaling(dcp, factor):
    rip = {j: Fraction(len(j) + 1) for j in dcp}
    base = original_scores(rip, dcp)
    scaled = original_scores(rip, {j: v * factor for j, v in dcp.items()})
    assert base == scaled


@given(st.lists(positive, min_size=1, max_size=40, unique=True))
def test_half_of_journals_sit_at_or_above_the_median(values):
    med = median_dcp(values)
    above = sum(1 for v in values if v / med >= 1)
    assert abs(above - len(values) / 2) <= 1


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_original_median_property_on_corpora(seed):
    corpus = random_corpus(random.Random(seed))
    table = original_table(corpus, min_pubs=0)
    dcps = [s.dcp for s in table.scores.values() if s.dcp is not None]
    rdcp_high = sum(1 for s in table.scores.values() if s.dcp is not None and s.dcp >= table.median_dcp)
    assert rdcp_high >= len(dcps) / 2


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_selection_is_a_shrinking_fixed_point(seed):
    corpus = random_corpus(random.Random(seed))
    sel = select_citing_journals(corpus)
    kept, shares = selection_round(corpus, sel.included, sel.threshold)
    assert kept == sel.included
    assert all(s >= sel.threshold for s in shares.values())
    # replaying the rounds shows the set only ever shrinks
    current = sel.included | set(sel.exclusion_round)
    while True:
        nxt, _ = selection_round(corpus, current, sel.threshold)
        assert nxt <= current
        if nxt == current:
            break
        current = nxt
    assert current == sel.included


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_selection_ignores_journal_order(seed):
    corpus = random_corpus(random.Random(seed))
    reordered = corpus.replace(
        journals=reversed(list(corpus.journals.values())),
        publications=reversed(list(corpus.publications.values())),
    )
    assert select_citing_journals(reordered) == select_citing_journals(corpus)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_forward_and_inverted_index_agree(seed):
    corpus = random_corpus(random.Random(seed))
    for jid in corpus.journals:
        forward = sum(
            1
            for p in corpus.citing_publications()
            for ref in p.references
            if corpus.publications[ref].journal_id == jid
            and corpus.publications[ref].year in corpus.cited_window
        )
        inverted = sum(len(corpus.cited_by(p.pub_id)) for p in corpus.window_pubs(jid))
        assert len(citations_received(corpus, jid)) == forward == inverted


def as_records(corpus):
    journals = [{"journal_id": j, "title": j, "is_trade": 0} for j in corpus.journals]
    pubs = [
        {"pub_id": p.pub_id, "journal_id": p.journal_id, "year": p.year, "doc_type": p.doc_type,
         "references": list(p.references) or ["missing"]}
        for p in corpus.publications.values()
    ]
    return journals, pubs


@settings(max_examples=50, deadline=None)
@given(seeds, st.randoms(use_true_random=False))
def test_ingestion_is_deterministic(seed, shuffler):
    journals, pubs = as_records(random_corpus(random.Random(seed)))
    first, _ = ingest(journals, pubs, IngestConfig(Y))
    shuffler.shuffle(journals)
    shuffler.shuffle(pubs)
    second, _ = ingest(journals, pubs, IngestConfig(Y))
    assert first.digest() == second.digest()


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_merging_preserves_counts(seed):
    rng = random.Random(seed)
    corpus = random_corpus(rng)
    ids = sorted(corpus.journals)
    # a rename chain ending in the first journal
    olds = rng.sample(ids[1:], rng.randint(1, len(ids) - 1))
    merge_map = dict(zip(olds, [ids[0], *olds[:-1]]))
    merged = merge_title_changes(corpus, merge_map)
    assert len(merged.publications) == len(corpus.publications)
    assert sum(len(p.references) for p in merged.publications.values()) == sum(
        len(p.references) for p in corpus.publications.values()
    )
    assert set(merged.journals) == set(ids) - set(olds)
    assert sum(merged.window_count(j) for j in merged.journals) == sum(
        corpus.window_count(j) for j in corpus.journals
    )
