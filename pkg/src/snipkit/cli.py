"""Command-line front end: ``snipkit {ingest,select,compute,compare,simulate}``.

Exit status is 0 on success, 1 when the run finished with per-record
warnings, and 2 on a hard error (nothing is written in that case).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .corpus import (
    DEFAULT_DOC_TYPES,
    IngestConfig,
    IngestError,
    CorpusError,
    export_corpus,
    ingest,
    load_corpus_cache,
    merge_title_changes,
    read_journals_csv,
    read_merges_csv,
    read_publications_jsonl,
    save_corpus_cache,
)
from .indicators import DEFAULT_MIN_PUBS, IndicatorError, Mode, build_table, compare_tables, snip_difference
from .reports import format_ratio, read_scores_csv, write_scores_csv
from .selection import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_THRESHOLD,
    SelectionError,
    load_selection,
    select_citing_journals,
)
from .synthlab import (
    InfeasibleSpecError,
    SynthSpec,
    bias_experiment,
    default_citing_set,
    field_assignment,
    field_totals,
    generate,
    mu_per_field,
    with_seed,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("snipkit")

EXIT_OK, EXIT_WARN, EXIT_ERROR = 0, 1, 2
CORPUS_CACHE = "corpus.snip.gz"
MANIFEST = "manifest.json"


class CommandError(Exception):
    """A hard error reported to the user with exit status 2."""


def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _require_file(path: str | Path | None, what: str) -> Path:
    if path is None:
        raise CommandError(f"missing {what}")
    path = Path(path)
    if not path.is_file():
        raise CommandError(f"file not found: {path}")
    return path


def _write_manifest(args, inputs: Sequence[Path], outputs: Sequence[str], started: datetime) -> None:
    out_dir = Path(args.out_dir)
    path = out_dir / MANIFEST
    manifest = {"tool": "snipkit", "runs": {}}
    if path.exists():
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            pass
    config = {
        k: (str(v) if isinstance(v, (Path, Fraction)) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("func",)
    }
    manifest["version"] = __version__
    manifest.setdefault("runs", {})[args.command] = {
        "command_line": args.argv,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
        "started": started.isoformat(),
        "finished": datetime.now(timezone.utc).isoformat(),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands --------------------------------------------------------------


def cmd_ingest(args) -> int:
    started = datetime.now(timezone.utc)
    jpath = _require_file(args.journals, "--journals")
    ppath = _require_file(args.publications, "--publications")
    mpath = _require_file(args.merges, "--merges") if args.merges else None
    if args.year is None:
        raise CommandError("missing --year")
    doc_types = frozenset(d.strip() for d in args.doc_types.split(",") if d.strip())
    config = IngestConfig(int(args.year), doc_types)

    corpus, report = ingest(read_journals_csv(jpath), read_publications_jsonl(ppath), config)
    if mpath is not None:
        corpus = merge_title_changes(corpus, read_merges_csv(mpath))

    out = _out_dir(args)
    save_corpus_cache(corpus, out / CORPUS_CACHE)
    (out / "ingest_report.json").write_text(report.to_json(), encoding="utf-8")
    outputs = [CORPUS_CACHE, "ingest_report.json"]
    if report.errors:
        (out / "warnings.txt").write_text("".join(f"{e}\n" for e in report.errors), encoding="utf-8")
        outputs.append("warnings.txt")
    _write_manifest(args, [p for p in (jpath, ppath, mpath) if p], outputs, started)
    print(
        f"ingested {len(corpus.publications)} publications in {len(corpus.journals)} journals "
        f"(digest {corpus.digest()[:12]}); {len(report.errors)} warning(s)"
    )
    return EXIT_WARN if report.errors else EXIT_OK


def cmd_select(args) -> int:
    started = datetime.now(timezone.utc)
    cpath = _require_file(args.corpus, "--corpus")
    corpus = load_corpus_cache(cpath)
    if not corpus.journals_publishing_in(corpus.year_of_analysis):
        raise CommandError(f"no journal publishes in {corpus.year_of_analysis}; nothing to select")
    selection = select_citing_journals(corpus, args.threshold, args.max_iterations)
    out = _out_dir(args)
    (out / "selection.json").write_text(selection.to_json(), encoding="utf-8")
    _write_manifest(args, [cpath], ["selection.json"], started)
    print(
        f"{len(selection.included)} citing journals, {len(selection.excluded)} excluded, "
        f"{selection.iterations} round(s)"
    )
    return EXIT_OK


def cmd_compute(args) -> int:
    started = datetime.now(timezone.utc)
    try:
        mode = Mode.parse(args.mode)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    cpath = _require_file(args.corpus, "--corpus")
    inputs = [cpath]
    corpus = load_corpus_cache(cpath)

    citing = None
    if args.citing_set:
        spath = _require_file(args.citing_set, "--citing-set")
        inputs.append(spath)
        selection = load_selection(spath)
        if selection.year_of_analysis != corpus.year_of_analysis:
            raise CommandError(
                f"selection is for {selection.year_of_analysis}, corpus for {corpus.year_of_analysis}"
            )
        citing = selection.included
    elif mode not in (Mode.RIP, Mode.SNIP_ORIGINAL):
        citing = select_citing_journals(corpus, args.threshold, args.max_iterations).included

    table = build_table(corpus, mode, citing, args.min_pubs)
    out = _out_dir(args)
    write_scores_csv(table, out / args.output)
    _write_manifest(args, inputs, [args.output], started)
    mean = table.weighted_mean_snip
    print(f"{mode.value}: {len(table)} journals scored, weighted mean {format_ratio(mean)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    started = datetime.now(timezone.utc)
    apath = _require_file(args.table_a, "first scores table")
    bpath = _require_file(args.table_b, "second scores table")
    a, b = read_scores_csv(apath), read_scores_csv(bpath)
    report = compare_tables(a, b, args.min_pubs)
    diff = snip_difference(a, b, args.diff_factor, min_pubs=args.min_pubs)
    positive, negative = diff.top(args.top_n)

    payload = report.to_dict()
    payload.update({
        "modes": [a.mode.value, b.mode.value],
        "factor": float(diff.factor),
        "factor_source": "flag" if args.diff_factor is not None else "weighted means",
        "skipped": diff.skipped,
        "top_positive": [{"journal_id": j, "difference": float(d)} for j, d in positive],
        "top_negative": [{"journal_id": j, "difference": float(d)} for j, d in negative],
    })
    out = _out_dir(args)
    (out / "comparison.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    _write_manifest(args, [apath, bpath], ["comparison.json"], started)

    print(f"journals compared: {report.n_common}  Pearson r = {report.correlation:.4f}")
    print(f"weighted means: {report.mean_a:.4f} vs {report.mean_b:.4f}  factor {float(diff.factor):.4f}")
    for title, rows in (("largest positive differences", positive), ("largest negative differences", negative)):
        print(title)
        for j, d in rows:
            print(f"  {j:<40} {format_ratio(d)}")
    return EXIT_OK


def _simulate_one(spec: SynthSpec) -> dict:
    corpus = generate(spec)
    assignment = field_assignment(spec)
    citing = default_citing_set(corpus)
    totals = field_totals(corpus, assignment, citing)
    mu_cited = mu_per_field(corpus, citing, assignment, "cited")
    mu_citing = mu_per_field(corpus, citing, assignment, "citing")
    fields = {}
    for name, (m1, m2) in totals.items():
        predicted = Fraction(3 * m2, m1) if m1 else None
        fields[name] = {
            "M1": m1,
            "M2": m2,
            "mu": float(mu_cited[name]) if name in mu_cited else None,
            "mu_exact": str(mu_cited[name]) if name in mu_cited else None,
            "mu_citing_weighted": float(mu_citing[name]) if name in mu_citing else None,
            "predicted_3M2_over_M1": float(predicted) if predicted is not None else None,
            "matches_prediction": name in mu_cited and mu_cited[name] == predicted,
        }
    return {"seed": spec.seed, "digest": corpus.digest(), "publications": len(corpus.publications), "fields": fields}


def cmd_simulate(args) -> int:
    started = datetime.now(timezone.utc)
    spath = _require_file(args.spec, "--spec")
    try:
        spec = SynthSpec.from_json(spath.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CommandError(f"{spath}: invalid spec ({exc})") from None
    specs = [with_seed(spec, spec.seed + k) for k in range(args.seeds)]
    # generating the first world validates the --spec file before anything is written
    first = _simulate_one(specs[0])
    if args.threads > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rest = list(pool.map(_simulate_one, specs[1:]))
    else:
        rest = [_simulate_one(s) for s in specs[1:]]
    runs = [first, *rest]

    bias = None
    if args.bias:
        if len(spec.fields) != 2:
            raise CommandError("--bias needs a spec with exactly two fields")
        bias = bias_experiment(spec.fields[0], spec.fields[1], seed=spec.seed,
                               year_of_analysis=spec.year_of_analysis)

    out = _out_dir(args)
    outputs = ["simulation.json"]
    result = {"spec": spec.to_dict(), "runs": runs}
    (out / "simulation.json").write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    if bias is not None:
        (out / "bias_report.json").write_text(bias.to_json(), encoding="utf-8")
        outputs.append("bias_report.json")
    if args.export:
        export_corpus(generate(spec), out / "corpus")
        outputs += ["corpus/journals.csv", "corpus/publications.jsonl"]
    _write_manifest(args, [spath], outputs, started)

    for run in runs:
        summary = ", ".join(
            f"{name}: mu={f['mu']:.6f} (3M2/M1={f['predicted_3M2_over_M1']:.6f})"
            for name, f in run["fields"].items()
            if f["mu"] is not None
        )
        print(f"seed {run['seed']}: {summary}")
    if bias is not None:
        print("bias experiment: " + ("pass" if bias.ok else "FAIL"))
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with defaults for any flag")
    common.add_argument("--threads", type=int, default=1, help="worker processes (simulate)")
    common.add_argument("--out-dir", default=".", help="directory for outputs and manifest.json")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="snipkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"snipkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="build a corpus cache from raw records")
    p.add_argument("--journals", help="journals.csv")
    p.add_argument("--publications", help="publications.jsonl")
    p.add_argument("--merges", help="merges.csv with title changes")
    p.add_argument("--year", type=int, help="year of analysis")
    p.add_argument("--doc-types", default=",".join(sorted(DEFAULT_DOC_TYPES)),
                   help="comma-separated document types to keep")
    p.set_defaults(func=cmd_ingest)

    def selection_flags(p):
        p.add_argument("--threshold", type=_fraction, default=Fraction(str(DEFAULT_THRESHOLD)),
                       help="minimum share of publications with an active reference (default 0.20)")
        p.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS)

    p = sub.add_parser("select", parents=[common], help="select citing journals")
    p.add_argument("--corpus", default=None, help=f"corpus cache (default OUT_DIR/{CORPUS_CACHE})")
    selection_flags(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("compute", parents=[common], help="score journals under one indicator")
    p.add_argument("--corpus", default=None, help=f"corpus cache (default OUT_DIR/{CORPUS_CACHE})")
    p.add_argument("--mode", default="snip-revised",
                   help="rip, snip-original, snip-revised, audience-factor, fractional-counting, apriori")
    p.add_argument("--citing-set", help="selection.json; computed on the fly when omitted")
    p.add_argument("--min-pubs", type=int, default=DEFAULT_MIN_PUBS)
    p.add_argument("--output", default="scores.csv")
    selection_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", parents=[common], help="compare two scores.csv tables")
    p.add_argument("table_a", help="first table (the revised scores in the difference)")
    p.add_argument("table_b", help="second table (the original scores in the difference)")
    p.add_argument("--min-pubs", type=int, default=DEFAULT_MIN_PUBS)
    p.add_argument("--diff-factor", type=_fraction, default=None,
                   help="scale for the second table (default: ratio of weighted means)")
    p.add_argument("--top-n", type=int, default=10)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[common], help="run synthetic-world experiments")
    p.add_argument("--spec", help="spec.json describing the world")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds to run")
    p.add_argument("--bias", action="store_true", help="also run the two-field bias experiment")
    p.add_argument("--export", action="store_true", help="write the generated corpus files")
    p.set_defaults(func=cmd_simulate)
    return parser


def _config_defaults(path: str, command: str) -> dict:
    cfg_path = _require_file(path, "--config")
    try:
        data = tomllib.loads(cfg_path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise CommandError(f"{cfg_path}: {exc}") from None
    flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
    flat.update(data.get(command, {}))
    return {k.replace("-", "_"): v for k, v in flat.items()}


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _config_defaults(args.config, args.command)
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in subparser._actions}
        unknown = sorted(set(defaults) - set(known))
        if unknown:
            raise CommandError(f"{args.config}: unknown setting(s) {unknown}")
        for key, value in defaults.items():
            action = known[key]
            if action.type is not None and not isinstance(value, bool):
                defaults[key] = action.type(str(value))
        subparser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if getattr(args, "corpus", "unset") is None:
        args.corpus = str(Path(args.out_dir) / CORPUS_CACHE)
    args.argv = ["snipkit", *argv]
    return args


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    except (CommandError, IngestError, CorpusError, IndicatorError, SelectionError,
            InfeasibleSpecError, FileNotFoundError, ValueError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"snipkit: error: {message}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
