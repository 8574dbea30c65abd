import csv
import json
from pathlib import Path

import pytest

from snipkit.cli import main
from snipkit.corpus import load_corpus_cache

from builders import MERGE_MAP, cascade_corpus, merger_corpus, write_raw

DATA = Path(__file__).parent / "data"


def ingest_args(raw: Path, out: Path, *extra):
    return ["ingest", "--journals", str(raw / "journals.csv"), "--publications",
            str(raw / "publications.jsonl"), "--year", "2010", "--out-dir", str(out), *extra]


def scores(path: Path) -> dict:
    with open(path, newline="", encoding="utf-8") as fh:
        return {row["journal_id"]: row for row in csv.DictReader(fh)}


@pytest.fixture
def raw(tmp_path):
    return write_raw(merger_corpus(), tmp_path / "raw", MERGE_MAP)


def test_ingest_valid(raw, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(ingest_args(raw, out)) == 0
    corpus = load_corpus_cache(out / "corpus.snip.gz")
    assert set(corpus.journals) == set(merger_corpus().journals)
    assert len(corpus.publications) == len(merger_corpus().publications)
    report = json.loads((out / "ingest_report.json").read_text())
    assert report["publications_kept"] == len(corpus.publications)
    manifest = json.loads((out / "manifest.json").read_text())
    run = manifest["runs"]["ingest"]
    assert sorted(run["outputs"]) == ["corpus.snip.gz", "ingest_report.json"]
    assert len(run["inputs"]) == 2
    assert not (out / "warnings.txt").exists()
    assert "ingested" in capsys.readouterr().out


def test_ingest_warnings(raw, tmp_path):
    with open(raw / "publications.jsonl", "a", encoding="utf-8") as fh:
        fh.write("{not json\n")
    out = tmp_path / "out"
    assert main(ingest_args(raw, out)) == 1
    assert "invalid JSON" in (out / "warnings.txt").read_text()


def test_ingest_duplicate_pub_id(raw, tmp_path, capsys):
    lines = (raw / "publications.jsonl").read_text().splitlines()
    dup = json.loads(lines[0])
    (raw / "publications.jsonl").write_text("\n".join(lines + [json.dumps(dup)]) + "\n")
    out = tmp_path / "out"
    assert main(ingest_args(raw, out)) == 2
    assert dup["pub_id"] in capsys.readouterr().err
    assert not out.exists()


def test_ingest_missing_file(raw, tmp_path, capsys):
    (raw / "journals.csv").unlink()
    assert main(ingest_args(raw, tmp_path / "out")) == 2
    err = capsys.readouterr().err
    assert "file not found" in err and str(raw / "journals.csv") in err


def test_select_cascade(tmp_path):
    out = tmp_path / "out"
    raw = write_raw(cascade_corpus(), tmp_path / "raw")
    assert main(ingest_args(raw, out)) == 0
    assert main(["select", "--out-dir", str(out)]) == 0
    sel = json.loads((out / "selection.json").read_text())
    assert sel["included"] == ["D", "E"]
    assert sel["exclusion_round"] == {"A": 1, "B": 2, "C": 3}
    assert sel["iterations"] == 4


def test_select_empty_corpus(tmp_path):
    raw = tmp_path / "raw"
    raw.mkdir()
    (raw / "journals.csv").write_text("journal_id,title,is_trade\n")
    (raw / "publications.jsonl").write_text("")
    out = tmp_path / "out"
    assert main(ingest_args(raw, out)) == 0
    assert main(["select", "--out-dir", str(out)]) == 2
    assert not (out / "selection.json").exists()


def test_compute_original_with_merge(raw, tmp_path):
    out = tmp_path / "out"
    assert main(ingest_args(raw, out, "--merges", str(raw / "merges.csv"))) == 0
    assert main(["compute", "--mode", "snip-original", "--min-pubs", "0", "--out-dir", str(out)]) == 0
    row = scores(out / "scores.csv")["XY"]
    assert (row["rip"], row["dcp"], row["snip"]) == ("18.0000", "10.0000", "5.4000")


def test_compute_revised_before_and_after_merge(raw, tmp_path):
    before, after = tmp_path / "before", tmp_path / "after"
    assert main(ingest_args(raw, before)) == 0
    assert main(ingest_args(raw, after, "--merges", str(raw / "merges.csv"))) == 0
    for out in (before, after):
        assert main(["compute", "--mode", "snip-revised", "--out-dir", str(out)]) == 0
    b, a = scores(before / "scores.csv"), scores(after / "scores.csv")
    assert [(b[j]["dcp"], b[j]["snip"]) for j in ("X", "Y")] == [("2.0000", "6.0000"), ("4.0000", "6.0000")]
    assert (a["XY"]["dcp"], a["XY"]["snip"]) == ("3.0000", "6.0000")


def test_compute_with_selection_file(raw, tmp_path):
    out = tmp_path / "out"
    main(ingest_args(raw, out))
    assert main(["select", "--out-dir", str(out)]) == 0
    assert main(["compute", "--mode", "apriori", "--citing-set", str(out / "selection.json"),
                 "--output", "apriori.csv", "--out-dir", str(out)]) == 0
    assert scores(out / "apriori.csv")["X"]["mode"] == "apriori"
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["runs"]) == {"ingest", "select", "compute"}
    assert len(list(out.glob("manifest*"))) == 1


def test_compute_unknown_mode(raw, tmp_path, capsys):
    out = tmp_path / "out"
    main(ingest_args(raw, out))
    assert main(["compute", "--mode", "h-index", "--out-dir", str(out)]) == 2
    assert "h-index" in capsys.readouterr().err
    assert not (out / "scores.csv").exists()


def test_scores_are_byte_identical_across_runs(raw, tmp_path):
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        main(ingest_args(raw, out))
        main(["compute", "--mode", "snip-revised", "--min-pubs", "0", "--out-dir", str(out)])
        outputs.append((out / "scores.csv").read_bytes())
    assert outputs[0] == outputs[1]


def write_top_tables(tmp_path):
    rows = list(csv.DictReader(open(DATA / "top_journals.csv", newline="", encoding="utf-8")))
    paths = []
    for column, mode in (("revised", "snip-revised"), ("original", "snip-original")):
        path = tmp_path / f"{column}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["journal_id", "mode", "m", "n", "rip", "dcp", "rdcp", "snip", "flags"])
            for r in rows:
                w.writerow([r["journal"], mode, 100, 0, "", "", "", r[column], ""])
        paths.append(path)
    return paths


def test_compare_self(tmp_path):
    revised, _ = write_top_tables(tmp_path)
    out = tmp_path / "cmp"
    assert main(["compare", str(revised), str(revised), "--out-dir", str(out)]) == 0
    result = json.loads((out / "comparison.json").read_text())
    assert result["correlation"] == pytest.approx(1.0)
    assert result["factor"] == pytest.approx(1.0)


def test_compare_top_journal_tables(tmp_path, capsys):
    revised, original = write_top_tables(tmp_path)
    out = tmp_path / "cmp"
    assert main(["compare", str(revised), str(original), "--diff-factor", "1.26",
                 "--top-n", "3", "--out-dir", str(out)]) == 0
    result = json.loads((out / "comparison.json").read_text())
    assert result["top_positive"][0]["journal_id"] == "Acta Crystallographica Section A"
    assert result["top_positive"][0]["difference"] == pytest.approx(12.07, abs=0.1)
    assert result["top_negative"][0]["journal_id"] == "IEEE Trans. on Pattern Analysis and Machine Intelligence"
    assert len(result["scatter"]) == 21
    assert "Acta Crystallographica Section A" in capsys.readouterr().out


def test_compare_disjoint(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("journal_id,mode,m,snip\nA,snip-revised,100,1\nB,snip-revised,100,2\n")
    b.write_text("journal_id,mode,m,snip\nC,snip-original,100,1\nD,snip-original,100,2\n")
    assert main(["compare", str(a), str(b), "--out-dir", str(tmp_path / "cmp")]) == 2
    assert not (tmp_path / "cmp" / "comparison.json").exists()


def write_spec(path, **field):
    spec = {"fields": [{"name": "a", "n_cited_journals": 3, **field}], "seed": 11}
    path.write_text(json.dumps(spec))
    return path


def test_simulate_balanced_world(tmp_path):
    spec = write_spec(tmp_path / "spec.json", ref_count_distribution={"0": 0.3, "4": 0.7})
    out = tmp_path / "sim"
    assert main(["simulate", "--spec", str(spec), "--seeds", "3", "--threads", "2",
                 "--export", "--out-dir", str(out)]) == 0
    result = json.loads((out / "simulation.json").read_text())
    assert [r["seed"] for r in result["runs"]] == [11, 12, 13]
    assert all(r["fields"]["a"]["mu_exact"] == "1" for r in result["runs"])
    assert (out / "corpus" / "publications.jsonl").exists()


def test_simulate_growth(tmp_path):
    spec = write_spec(tmp_path / "spec.json", growth_factor=1.1)
    out = tmp_path / "sim"
    assert main(["simulate", "--spec", str(spec), "--out-dir", str(out)]) == 0
    field = json.loads((out / "simulation.json").read_text())["runs"][0]["fields"]["a"]
    assert field["matches_prediction"]
    assert field["mu"] == pytest.approx(3 * field["M2"] / field["M1"])
    assert field["mu"] > 1


def test_simulate_bias(tmp_path):
    spec = {"fields": [
        {"name": "low", "ref_count_distribution": {"0": 0.1, "10": 0.9}},
        {"name": "high", "ref_count_distribution": {"0": 0.5, "10": 0.5}},
    ]}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "sim"
    assert main(["simulate", "--spec", str(path), "--bias", "--out-dir", str(out)]) == 0
    assert json.loads((out / "bias_report.json").read_text())["ok"] is True


def test_simulate_infeasible(tmp_path):
    spec = write_spec(tmp_path / "spec.json", pubs_per_journal_per_year=1, ref_count_distribution={"40": 1})
    assert main(["simulate", "--spec", str(spec), "--out-dir", str(tmp_path / "sim")]) == 2
    assert not (tmp_path / "sim").exists()


def test_config_file_and_override(raw, tmp_path):
    out = tmp_path / "out"
    main(ingest_args(raw, out))
    config = tmp_path / "snipkit.toml"
    config.write_text('min_pubs = 0\n[compute]\nmode = "snip-original"\noutput = "cfg.csv"\n')
    assert main(["compute", "--config", str(config), "--out-dir", str(out)]) == 0
    assert scores(out / "cfg.csv")["X"]["mode"] == "snip-original"
    assert main(["compute", "--config", str(config), "--mode", "rip", "--out-dir", str(out)]) == 0
    assert scores(out / "cfg.csv")["X"]["mode"] == "rip"
    config.write_text("bogus = 1\n")
    assert main(["compute", "--config", str(config), "--out-dir", str(out)]) == 2


def test_usage_error_exit_code(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["--version"]) == 0
