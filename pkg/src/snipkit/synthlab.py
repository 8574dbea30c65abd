"""Synthetic citation worlds for checking source normalization.

A world is a list of fields. Each field has cited journals publishing in
``Y-3 .. Y-1`` and citing journals publishing in ``Y`` (by default the same
journals), plus a small archive of old publications at ``Y-5`` that gives
every publication something to reference. Citing publications draw their
active-reference count from a per-field distribution; mass at 0 produces
publications without active references, which cite the archive only.

Under the idealized assumptions (no cross-field references, a constant
yearly output, every journal with some active reference) the
publication-weighted mean revised SNIP of a field's cited journals is
exactly ``3 * M2 / M1 = 1``. The knobs break one assumption at a time:
``cross_field_fraction`` sends references to another field,
``growth_factor`` or per-year counts change the output over time, and
``allow_inactive_journals`` lets a journal end up with no active reference.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, Journal, Publication
from .indicators import Mode, build_table, resolve_citing_set

ARCHIVE_LAG = 5


class InfeasibleSpecError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    name: str
    n_cited_journals: int = 5
    n_citing_journals: int | None = None
    # one count for Y-3 (scaled by growth_factor per year) or four counts for Y-3 .. Y
    pubs_per_journal_per_year: int | tuple[int, ...] = 10
    ref_count_distribution: Mapping[int, float] = field(default_factory=lambda: {12: 1.0})
    cross_field_fraction: float = 0.0
    cross_field_target: str | None = None
    growth_factor: float = 1.0
    size_jitter: int = 0
    old_ref_count: int = 0
    allow_inactive_journals: bool = False

    @property
    def zero_active_weight(self) -> float:
        total = sum(self.ref_count_distribution.values())
        return self.ref_count_distribution.get(0, 0.0) / total if total else 0.0


@dataclass(frozen=True)
class SynthSpec:
    fields: tuple[FieldSpec, ...]
    year_of_analysis: int = 2010
    seed: int = 0
    split_citing_cited: bool = False

    def to_dict(self) -> dict:
        data = asdict(self)
        for f in data["fields"]:
            f["ref_count_distribution"] = {str(k): v for k, v in f["ref_count_distribution"].items()}
            if isinstance(f["pubs_per_journal_per_year"], tuple):
                f["pubs_per_journal_per_year"] = list(f["pubs_per_journal_per_year"])
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "SynthSpec":
        fields = []
        for raw in data["fields"]:
            raw = dict(raw)
            if "ref_count_distribution" in raw:
                raw["ref_count_distribution"] = {
                    int(k): float(v) for k, v in raw["ref_count_distribution"].items()
                }
            if isinstance(raw.get("pubs_per_journal_per_year"), list):
                raw["pubs_per_journal_per_year"] = tuple(raw["pubs_per_journal_per_year"])
            fields.append(FieldSpec(**raw))
        return cls(
            fields=tuple(fields),
            year_of_analysis=int(data.get("year_of_analysis", 2010)),
            seed=int(data.get("seed", 0)),
            split_citing_cited=bool(data.get("split_citing_cited", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "SynthSpec":
        return cls.from_dict(json.loads(text))


def _cited_ids(spec: SynthSpec, f: FieldSpec) -> list[str]:
    return [f"{f.name}.J{k:03d}" for k in range(f.n_cited_journals)]


def _citing_ids(spec: SynthSpec, f: FieldSpec) -> list[str]:
    if not spec.split_citing_cited:
        return _cited_ids(spec, f)
    n = f.n_cited_journals if f.n_citing_journals is None else f.n_citing_journals
    return [f"{f.name}.C{k:03d}" for k in range(n)]


def field_assignment(spec: SynthSpec) -> dict[str, str]:
    """Journal id -> field name for every journal ``generate(spec)`` creates."""
    out = {}
    for f in spec.fields:
        for jid in _cited_ids(spec, f) + _citing_ids(spec, f):
            out[jid] = f.name
    return out


def _validate(spec: SynthSpec) -> None:
    names = [f.name for f in spec.fields]
    if not names:
        raise InfeasibleSpecError("a world needs at least one field")
    if len(set(names)) != len(names):
        raise InfeasibleSpecError(f"duplicate field names in {names}")
    for f in spec.fields:
        if f.n_cited_journals < 1:
            raise InfeasibleSpecError(f"field {f.name!r}: needs at least one cited journal")
        if not spec.split_citing_cited and f.n_citing_journals not in (None, f.n_cited_journals):
            raise InfeasibleSpecError(
                f"field {f.name!r}: citing and cited journals coincide unless split_citing_cited is set"
            )
        if spec.split_citing_cited and f.n_citing_journals is not None and f.n_citing_journals < 1:
            raise InfeasibleSpecError(f"field {f.name!r}: needs at least one citing journal")
        counts = f.pubs_per_journal_per_year
        if isinstance(counts, tuple):
            if len(counts) != 4 or any(c < 1 for c in counts):
                raise InfeasibleSpecError(f"field {f.name!r}: per-year counts must be four positive integers")
        elif counts < 1:
            raise InfeasibleSpecError(f"field {f.name!r}: pubs_per_journal_per_year must be positive")
        if f.growth_factor <= 0:
            raise InfeasibleSpecError(f"field {f.name!r}: growth_factor must be positive")
        dist = f.ref_count_distribution
        if not dist or any(k < 0 for k in dist) or any(w < 0 for w in dist.values()):
            raise InfeasibleSpecError(f"field {f.name!r}: bad ref_count_distribution {dict(dist)}")
        if sum(w for k, w in dist.items() if k > 0) <= 0 and not f.allow_inactive_journals:
            raise InfeasibleSpecError(f"field {f.name!r}: no mass on positive reference counts")
        if not 0 <= f.cross_field_fraction <= 1:
            raise InfeasibleSpecError(f"field {f.name!r}: cross_field_fraction outside [0, 1]")
        if f.cross_field_fraction > 0:
            others = [n for n in names if n != f.name]
            if not others:
                raise InfeasibleSpecError(f"field {f.name!r}: cross-field references need another field")
            if f.cross_field_target is not None and f.cross_field_target not in others:
                raise InfeasibleSpecError(f"field {f.name!r}: unknown cross_field_target {f.cross_field_target!r}")


def _yearly_counts(f: FieldSpec, base: int) -> list[int]:
    if isinstance(f.pubs_per_journal_per_year, tuple):
        return list(f.pubs_per_journal_per_year)
    return [max(1, round(base * f.growth_factor ** k)) for k in range(4)]


def _draw_r(rng: random.Random, values: list[int], weights: list[float]) -> int:
    return rng.choices(values, weights)[0]


def generate(spec: SynthSpec) -> Corpus:
    """Build the corpus described by ``spec``; identical specs give identical corpora."""
    _validate(spec)
    rng = random.Random(spec.seed)
    y = spec.year_of_analysis
    window_years = [y - 3, y - 2, y - 1]
    journals: list[Journal] = []
    pubs: list[Publication] = []
    archive: dict[str, list[str]] = {}
    pools: dict[str, list[str]] = {}
    year_y_counts: dict[str, list[tuple[str, int]]] = {}

    # pass 1: journals, archive and cited-window publications
    for f in spec.fields:
        cited = _cited_ids(spec, f)
        citing = _citing_ids(spec, f)
        for jid in dict.fromkeys(cited + citing):
            journals.append(Journal(jid, (f"Synthetic journal {jid}",)))

        n_archive = max(2, len(cited))
        arch = [f"{f.name}.A{k:04d}" for k in range(n_archive)]
        for k, pid in enumerate(arch):
            pubs.append(Publication(pid, cited[k % len(cited)], y - ARCHIVE_LAG,
                                    references=(arch[(k + 1) % n_archive],)))
        archive[f.name] = arch

        pool = []
        y_counts = []
        base = f.pubs_per_journal_per_year if isinstance(f.pubs_per_journal_per_year, int) else 0
        for jid in cited:
            counts = _yearly_counts(f, base + (rng.randint(0, f.size_jitter) if f.size_jitter else 0))
            for year, c in zip(window_years, counts[:3]):
                for k in range(c):
                    pid = f"{jid}.{year}.{k:04d}"
                    pubs.append(Publication(pid, jid, year, references=(rng.choice(arch),)))
                    pool.append(pid)
            y_counts.append((jid, counts[3]))
        pools[f.name] = pool

        if spec.split_citing_cited:
            total = sum(c for _, c in y_counts)
            if total < len(citing):
                raise InfeasibleSpecError(
                    f"field {f.name!r}: {total} citing publications cannot fill {len(citing)} journals"
                )
            share, extra = divmod(total, len(citing))
            y_counts = [(jid, share + (1 if k < extra else 0)) for k, jid in enumerate(citing)]
        year_y_counts[f.name] = y_counts

    # pass 2: citing publications of the year of analysis
    for f in spec.fields:
        own = pools[f.name]
        if f.cross_field_target is not None:
            foreign = pools[f.cross_field_target]
        else:
            foreign = [p for g in spec.fields if g.name != f.name for p in pools[g.name]]
        values = sorted(f.ref_count_distribution)
        weights = [f.ref_count_distribution[v] for v in values]
        positive = [(v, w) for v, w in zip(values, weights) if v > 0 and w > 0]
        r_max = max((v for v, _ in positive), default=0)
        if r_max > len(own):
            raise InfeasibleSpecError(
                f"field {f.name!r}: {r_max} active references exceed {len(own)} citable publications"
            )
        if f.cross_field_fraction > 0 and r_max > len(foreign):
            raise InfeasibleSpecError(
                f"field {f.name!r}: {r_max} active references exceed {len(foreign)} cross-field targets"
            )
        arch = archive[f.name]
        for jid, count in year_y_counts[f.name]:
            draws = [_draw_r(rng, values, weights) for _ in range(count)]
            if not f.allow_inactive_journals and not any(draws):
                pv, pw = zip(*positive)
                draws[0] = _draw_r(rng, list(pv), list(pw))
            for k, r in enumerate(draws):
                n_cross = sum(1 for _ in range(r) if rng.random() < f.cross_field_fraction) if r else 0
                refs = rng.sample(own, r - n_cross) + rng.sample(foreign, n_cross)
                n_old = max(1, f.old_ref_count) if r == 0 else f.old_ref_count
                refs += rng.sample(arch, min(n_old, len(arch)))
                pubs.append(Publication(f"{jid}.{y}.{k:04d}", jid, y, references=tuple(refs)))

    return Corpus(y, journals, pubs)


def default_citing_set(corpus: Corpus) -> frozenset[str]:
    """Synthetic journals are all treated as citing journals."""
    return frozenset(corpus.journals)


def field_totals(corpus: Corpus, assignment: Mapping[str, str], citing_set=None) -> dict[str, tuple[int, int]]:
    """Per field: (cited publications in ``Y-3 .. Y-1``, citing publications in ``Y``)."""
    citing = resolve_citing_set(corpus, citing_set)
    totals: dict[str, list[int]] = {}
    y = corpus.year_of_analysis
    for jid in corpus.journals:
        name = assignment.get(jid)
        if name is None:
            continue
        t = totals.setdefault(name, [0, 0])
        t[0] += corpus.window_count(jid)
        if jid in citing:
            t[1] += len(corpus.pubs_of(jid, y))
    return {k: (v[0], v[1]) for k, v in sorted(totals.items())}


def mu_per_field(
    corpus: Corpus,
    citing_set,
    assignment: Mapping[str, str],
    weighting: str = "cited",
    mode: Mode | str = Mode.SNIP_REVISED,
) -> dict[str, Fraction]:
    """Publication-weighted mean score per field.

    ``weighting="cited"`` averages over every journal with cited-window
    publications; ``"citing"`` only over the citing journals among them.
    """
    if weighting not in ("cited", "citing"):
        raise ValueError(f"weighting must be 'cited' or 'citing', not {weighting!r}")
    citing = resolve_citing_set(corpus, citing_set)
    table = build_table(corpus, mode, citing, min_pubs=0)
    sums: dict[str, list[Fraction]] = {}
    for jid, score in table.scores.items():
        if jid not in assignment:
            raise KeyError(f"journal {jid!r} has no field assignment")
        if weighting == "citing" and jid not in citing:
            continue
        acc = sums.setdefault(assignment[jid], [Fraction(0), Fraction(0)])
        if score.snip is not None:
            acc[0] += score.m * score.snip
            acc[1] += score.m
    return {name: s / w for name, (s, w) in sorted(sums.items()) if w}


def brute_force_snip(corpus: Corpus, citing_set, journal_id: str) -> float | None:
    """Revised SNIP by direct enumeration of every (citing publication, reference) pair.

    Deliberately shares nothing with the indicator code: it walks the raw
    publication mapping and uses floating point throughout.
    """
    y = corpus.year_of_analysis
    window = {y - 3, y - 2, y - 1}
    pubs = corpus.publications
    citing = set(corpus.journals) if citing_set is None else set(resolve_citing_set(corpus, citing_set))

    def active_refs(pub):
        return sum(1 for ref in pub.references
                   if pubs[ref].year in window and pubs[ref].journal_id in citing)

    m = sum(1 for p in pubs.values() if p.journal_id == journal_id and p.year in window)
    if m == 0:
        return None
    shares: dict[str, float] = {}
    terms = []
    for pub in pubs.values():
        if pub.year != y or pub.journal_id not in citing:
            continue
        hits = sum(1 for ref in pub.references
                   if pubs[ref].journal_id == journal_id and pubs[ref].year in window)
        r = active_refs(pub)
        if hits == 0 or r == 0:
            continue
        if pub.journal_id not in shares:
            cohort = [q for q in pubs.values() if q.journal_id == pub.journal_id and q.year == y]
            shares[pub.journal_id] = sum(1 for q in cohort if active_refs(q) > 0) / len(cohort)
        terms.extend([1.0 / (shares[pub.journal_id] * r)] * hits)
    return 3.0 * math.fsum(terms) / m


@dataclass
class BiasReport:
    fields: tuple[str, str]
    zero_active_share: dict[str, float]
    means: dict[str, dict[str, float]]
    gaps: dict[str, float]
    apriori_prediction: dict[str, float]
    shares_differ: bool
    passed: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {
            "fields": list(self.fields),
            "zero_active_share": self.zero_active_share,
            "means": self.means,
            "relative_gap": self.gaps,
            "apriori_prediction": self.apriori_prediction,
            "shares_differ": self.shares_differ,
            "passed": self.passed,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


EQUAL_TOLERANCE = 0.01
DIVERGENCE_THRESHOLD = 0.05


def relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def bias_experiment(
    spec_low: FieldSpec,
    spec_high: FieldSpec,
    modes: Sequence[Mode | str] = (Mode.SNIP_REVISED, Mode.APRIORI, Mode.FRACTIONAL_COUNTING, Mode.AUDIENCE_FACTOR),
    seed: int = 0,
    year_of_analysis: int = 2010,
) -> BiasReport:
    """Field means of several indicators in a two-field world.

    Revised SNIP must give both fields the same mean (within 1%). When the
    fields' shares of publications without active references differ, the a
    priori and fractional-counting means must differ by more than 5%.
    """
    spec = SynthSpec((spec_low, spec_high), year_of_analysis=year_of_analysis, seed=seed)
    corpus = generate(spec)
    assignment = field_assignment(spec)
    citing = default_citing_set(corpus)
    names = (spec_low.name, spec_high.name)
    modes = [m if isinstance(m, Mode) else Mode.parse(m) for m in modes]

    zero_share = {}
    prediction = {}
    totals = field_totals(corpus, assignment, citing)
    for name in names:
        cohort = [p for p in corpus.citing_publications() if assignment[p.journal_id] == name]
        active = sum(1 for p in cohort if any(j in citing for j in corpus.window_targets(p.pub_id)))
        zero_share[name] = 1 - active / len(cohort)
        # without the share correction every active publication distributes exactly 1
        prediction[name] = 3 * active / totals[name][0]

    means: dict[str, dict[str, float]] = {}
    gaps: dict[str, float] = {}
    for mode in modes:
        mu = mu_per_field(corpus, citing, assignment, mode=mode)
        means[mode.value] = {name: float(mu[name]) for name in names}
        gaps[mode.value] = relative_gap(*(float(mu[n]) for n in names))

    differ = abs(zero_share[names[0]] - zero_share[names[1]]) > EQUAL_TOLERANCE
    passed = {}
    for mode in modes:
        gap = gaps[mode.value]
        if mode is Mode.SNIP_REVISED or mode is Mode.AUDIENCE_FACTOR:
            passed[mode.value] = gap <= EQUAL_TOLERANCE
        elif mode in (Mode.APRIORI, Mode.FRACTIONAL_COUNTING):
            passed[mode.value] = gap > DIVERGENCE_THRESHOLD if differ else gap <= EQUAL_TOLERANCE
    return BiasReport(names, zero_share, means, gaps, prediction, differ, passed)


def with_seed(spec: SynthSpec, seed: int) -> SynthSpec:
    return replace(spec, seed=seed)


def random_spec(rng: random.Random, year_of_analysis: int = 2010) -> SynthSpec:
    """An assumption-satisfying world with randomized shape, for property checks."""
    n_fields = rng.randint(1, 3)
    heavy = [{1: 0.7, 50: 0.3}, {1: 0.9, 2: 0.05, 50: 0.05}, {50: 1.0}]
    fields = []
    for k in range(n_fields):
        journals = rng.randint(1, 5)
        if rng.random() < 0.4:
            dist = dict(rng.choice(heavy))
        else:
            dist = {r: rng.random() + 0.01 for r in rng.sample(range(1, 30), rng.randint(1, 5))}
        # enough cited publications for the longest reference list
        per_year = max(rng.randint(6, 20), math.ceil(max(dist) / (3 * journals)))
        zero = rng.choice([0.0, 0.1, 0.3, 0.6, rng.random() * 0.6])
        if zero:
            scale = sum(dist.values())
            dist = {r: w * (1 - zero) / scale for r, w in dist.items()}
            dist[0] = zero
        fields.append(FieldSpec(
            name=f"F{k}",
            n_cited_journals=journals,
            pubs_per_journal_per_year=per_year,
            ref_count_distribution=dist,
            size_jitter=rng.randint(0, 10),
            old_ref_count=rng.randint(0, 2),
        ))
    return SynthSpec(tuple(fields), year_of_analysis, seed=rng.randrange(2**31))


__all__ = [
    "BiasReport",
    "FieldSpec",
    "InfeasibleSpecError",
    "SynthSpec",
    "bias_experiment",
    "brute_force_snip",
    "default_citing_set",
    "field_assignment",
    "field_totals",
    "generate",
    "mu_per_field",
    "random_spec",
    "relative_gap",
    "with_seed",
]
