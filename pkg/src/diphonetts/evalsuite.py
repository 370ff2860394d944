"""Intelligibility test corpora and scoring.

Ships the standard word lists and sentence sets machine-readably (DRT word
pairs, MRT word sets, PB-50 lists, Harvard sentences, Haskins sentences,
the MOS-X rating form) with loaders that assert the published cardinalities,
plus keyword-based transcription scoring and batch prompt generation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

CARRIER_PREFIX = "Please write down the word"
CARRIER_SUFFIX = "now."

#: Connective words excluded from Harvard keyword scoring.
STOP_WORDS = frozenset(
    """a an the and or but if then than is are was were be been am do does
    did has have had will would can could should may must shall i you he
    she we they it me him them us my your his her its our their this these
    that those in on at by of to for with as from into onto over under
    about there here when while who whom whose which what how why not no
    nor so such very too also only own same s t don now d ll m o re ve y
    """.split()
)


class CorpusError(ValueError):
    pass


def _corpus_text(name: str) -> str:
    return resources.files("diphonetts.data.corpora").joinpath(name).read_text("utf-8")


def _rows(name: str) -> list[list[str]]:
    out = []
    for line in _corpus_text(name).splitlines():
        if not line or line.startswith("#"):
            continue
        out.append(line.split("\t"))
    return out


@dataclass
class HarvardSentence:
    list_number: int
    sentence_number: int
    text: str

    @property
    def keywords(self) -> list[str]:
        words = re.findall(r"[A-Za-z']+", self.text.lower())
        return [w for w in words if w not in STOP_WORDS]


def load_harvard() -> list[HarvardSentence]:
    rows = _rows("harvard.tsv")
    sentences = [HarvardSentence(int(r[0]), int(r[1]), r[2]) for r in rows]
    lists = {s.list_number for s in sentences}
    if len(lists) != 72 or len(sentences) != 720:
        raise CorpusError(
            f"harvard corpus: {len(lists)} lists / {len(sentences)} sentences "
            "(expected 72 / 720)"
        )
    return sentences


def load_drt() -> list[tuple[str, str, str]]:
    rows = _rows("drt.tsv")
    pairs = [(r[0], r[1], r[2]) for r in rows]
    if len(pairs) != 96:
        raise CorpusError(f"drt corpus: {len(pairs)} pairs (expected 96)")
    if len({c for c, _, _ in pairs}) != 6:
        raise CorpusError("drt corpus: expected 6 categories")
    return pairs


def load_mrt() -> list[list[str]]:
    rows = _rows("mrt.tsv")
    sets = [r[1:] for r in rows]
    if len(sets) != 50 or any(len(s) != 6 for s in sets):
        raise CorpusError(f"mrt corpus: {len(sets)} sets (expected 50 x 6)")
    return sets


def load_pb50() -> dict[int, list[str]]:
    rows = _rows("pb50.tsv")
    lists: dict[int, list[str]] = {}
    for r in rows:
        lists.setdefault(int(r[0]), []).append(r[1])
    if len(lists) != 20 or any(len(v) != 50 for v in lists.values()):
        raise CorpusError("pb50 corpus: expected 20 lists of 50 words")
    return lists


def load_haskins() -> dict[int, list[str]]:
    rows = _rows("haskins.tsv")
    series: dict[int, list[str]] = {}
    for r in rows:
        series.setdefault(int(r[0]), []).append(r[2])
    if len(series) != 4 or any(len(v) != 50 for v in series.values()):
        raise CorpusError("haskins corpus: expected 4 series of 50 sentences")
    return series


def mosx_form() -> str:
    return _corpus_text("mosx.txt")


def score_transcription(reference: str, transcript: str,
                        keywords: list[str] | None = None) -> tuple[int, int]:
    """(correctly transcribed keywords, total keywords).

    Case-insensitive exact word matching; keywords default to the
    reference's non-connective words. Repeated keywords must each appear.
    """
    if keywords is None:
        keywords = HarvardSentence(0, 0, reference).keywords
    heard = re.findall(r"[A-Za-z']+", transcript.lower())
    counts: dict[str, int] = {}
    for w in heard:
        counts[w] = counts.get(w, 0) + 1
    correct = 0
    for kw in keywords:
        k = kw.lower()
        if counts.get(k, 0) > 0:
            counts[k] -= 1
            correct += 1
    return correct, len(keywords)


@dataclass
class Prompt:
    name: str
    text: str
    answer: str


def suite_prompts(kind: str, list_number: int = 1) -> list[Prompt]:
    """Prompt set for one test: text to synthesize plus the answer key."""
    kind = kind.lower()
    if kind == "harvard":
        return [
            Prompt(f"harvard_{s.list_number:02d}_{s.sentence_number:02d}",
                   s.text, " ".join(s.keywords))
            for s in load_harvard()
            if s.list_number == list_number
        ]
    if kind == "drt":
        return [
            Prompt(f"drt_{i:03d}_{category}", w1, f"{w1} {w2}")
            for i, (category, w1, w2) in enumerate(load_drt(), 1)
        ]
    if kind == "mrt":
        return [
            Prompt(f"mrt_{i:02d}", f"{CARRIER_PREFIX} {words[0]} {CARRIER_SUFFIX}",
                   " ".join(words))
            for i, words in enumerate(load_mrt(), 1)
        ]
    if kind == "pb50":
        words = load_pb50()[list_number]
        return [
            Prompt(f"pb50_{list_number:02d}_{i:02d}",
                   f"{CARRIER_PREFIX} {w} {CARRIER_SUFFIX}", w)
            for i, w in enumerate(words, 1)
        ]
    if kind == "haskins":
        return [
            Prompt(f"haskins_{list_number}_{i:02d}", text,
                   " ".join(HarvardSentence(0, 0, text).keywords))
            for i, text in enumerate(load_haskins()[list_number], 1)
        ]
    raise CorpusError(f"unknown test kind: {kind!r}")


def run_suite(engine, kind: str, out_dir: str | Path,
              list_number: int = 1, seed: int = 0) -> list[Prompt]:
    """Synthesize every prompt of a test into out_dir with an answer key."""
    from .audio_io import write_wav

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prompts = suite_prompts(kind, list_number)
    with open(out / "answer_key.tsv", "w", encoding="utf-8") as key:
        key.write("# name\tprompt\tanswer\n")
        for p in prompts:
            wav, _ = engine.synthesize(p.text, seed=seed)
            write_wav(out / f"{p.name}.wav", wav, engine.bank.rate)
            key.write(f"{p.name}\t{p.text}\t{p.answer}\n")
    (out / "score_sheet.tsv").write_text(
        "# name\ttranscript\n" + "".join(f"{p.name}\t\n" for p in prompts),
        encoding="utf-8",
    )
    return prompts
