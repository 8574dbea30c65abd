"""Hand-built corpora shared by the test modules."""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

from snipkit.corpus import Corpus, Journal, Publication

Y = 2010
WINDOW = (2007, 2008, 2009)


class CorpusBuilder:
    """Small helper that hands out sequential publication ids."""

    def __init__(self, year: int = Y):
        self.year = year
        self.journals: dict[str, Journal] = {}
        self.pubs: list[Publication] = []
        self._seq = 0

    def journal(self, jid: str, **kw) -> str:
        self.journals[jid] = Journal(jid, titles=(jid,), **kw)
        return jid

    def pub(self, jid: str, year: int, refs=(), **kw) -> str:
        self._seq += 1
        pid = f"{jid}-{year}-{self._seq:05d}"
        self.pubs.append(Publication(pid, jid, year, references=tuple(refs), **kw))
        return pid

    def window(self, jid: str, per_year=(1, 1, 1)) -> list[str]:
        years = WINDOW if self.year == Y else tuple(range(self.year - 3, self.year))
        return [self.pub(jid, yr) for yr, k in zip(years, per_year) for _ in range(k)]

    def build(self) -> Corpus:
        return Corpus(self.year, self.journals.values(), self.pubs)


def merger_corpus() -> Corpus:
    """Two journals X and Y of equal size whose citers differ in reference length.

    120 citing publications reference one X paper and five S papers, 240
    reference one Y paper and eleven S papers. Filler journals F1..F5 each
    get one citation with three active references, so the median citation
    potential of the database is 3. XY exists without publications as the
    merge target for X and Y.
    """
    b = CorpusBuilder()
    for jid in ("X", "Y", "XY", "S", "C", "G"):
        b.journal(jid)
    x = b.window("X", (4, 3, 3))
    y = b.window("Y", (4, 3, 3))
    s = b.window("S", (4, 4, 4))
    b.window("C")
    b.pub("X", Y, [s[0]])
    b.pub("Y", Y, [s[1]])
    b.pub("S", Y, [s[2]])
    for i in range(120):
        b.pub("C", Y, [x[i % 10]] + [s[(i + k) % 12] for k in range(5)])
    for i in range(240):
        b.pub("C", Y, [y[i % 10]] + [s[(i + k) % 12] for k in range(11)])
    for f in range(1, 6):
        fid = b.journal(f"F{f}")
        fw = b.window(fid)
        b.pub(fid, Y)  # no references: never active
        b.pub("G", Y, fw)
    return b.build()


MERGE_MAP = {"X": "XY", "Y": "XY"}


def cascade_corpus(with_boundary: bool = True) -> Corpus:
    """Citing journals that drop out one per round.

    A's analysis-year papers only cite old literature (round 1); B only cites
    A's window (round 2); C only cites B's window (round 3). D cites itself
    and stays. E has five papers of which exactly one is active (share 1/5).
    """
    b = CorpusBuilder()
    windows = {}
    for jid in ("A", "B", "C", "D"):
        b.journal(jid)
        windows[jid] = b.window(jid)
    old = b.pub("A", 2004)
    b.pub("A", Y, [old])
    b.pub("A", Y, [old])
    b.pub("B", Y, [windows["A"][0], windows["A"][1]])
    b.pub("C", Y, [windows["B"][0]])
    b.pub("C", Y, [windows["B"][2]])
    b.pub("D", Y, [windows["D"][0]])
    if with_boundary:
        b.journal("E")
        b.window("E")
        b.pub("E", Y, [windows["D"][1]])
        for _ in range(4):
            b.pub("E", Y, [old])
    return b.build()


def counterexample_corpus(with_long_citer: bool) -> Corpus:
    """J: ten window papers cited 80 times by papers with four active references.

    Five filler journals have citation potential 2, which fixes the database
    median at 2. The optional extra citer carries 100 active references.
    """
    b = CorpusBuilder()
    b.journal("J")
    b.journal("K")
    b.journal("BIG")
    b.journal("CIT")
    j = b.window("J", (4, 3, 3))
    k = b.window("K", (1, 1, 1))
    big = b.window("BIG", (33, 33, 33))
    b.window("CIT")
    for i in range(80):
        b.pub("CIT", Y, [j[i % 10], *k])
    for f in range(5):
        fid = b.journal(f"L{f}")
        lw = b.window(fid, (1, 1, 0))
        b.pub("CIT", Y, lw)
    if with_long_citer:
        b.pub("CIT", Y, [j[0], *big])
    return b.build()


def random_corpus(rng: random.Random, n_journals: int | None = None, all_active=()) -> Corpus:
    """A small random corpus; journals in ``all_active`` get only active citing papers."""
    b = CorpusBuilder()
    n = n_journals or rng.randint(2, 5)
    ids = [b.journal(f"J{k}") for k in range(n)]
    window = []
    for jid in ids:
        window += b.window(jid, tuple(rng.randint(1, 4) for _ in WINDOW))
    olds = [b.pub(jid, 2005) for jid in ids]
    for jid in ids:
        for _ in range(rng.randint(1, 6)):
            k = rng.randint(1 if jid in all_active else 0, min(len(window), 12))
            refs = rng.sample(window, k)
            if rng.random() < 0.3:
                refs.append(rng.choice(olds))
            b.pub(jid, Y, refs)
    return b.build()


def write_raw(corpus: Corpus, directory, merges=None):
    """Write ingestible journals.csv / publications.jsonl for ``corpus``.

    Publications without references get one unresolvable placeholder so
    ingestion keeps them.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "journals.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["journal_id", "title", "is_trade"])
        for j in corpus.journals.values():
            w.writerow([j.journal_id, f"Journal {j.journal_id}", int(j.is_trade)])
    with open(directory / "publications.jsonl", "w", encoding="utf-8") as fh:
        for p in corpus.publications.values():
            refs = list(p.references) or [f"external:{p.pub_id}"]
            rec = {"pub_id": p.pub_id, "journal_id": p.journal_id, "year": p.year,
                   "doc_type": p.doc_type, "references": refs}
            fh.write(json.dumps(rec) + "\n")
    if merges:
        with open(directory / "merges.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["old_journal_id", "new_journal_id"])
            w.writerows(sorted(merges.items()))
    return directory
