"""Trigram-HMM part-of-speech tagging over an 11-tag lexical-class set.

Candidate tags per word come from the MPOS lexicon (most likely first);
transition statistics come from a tagged n-gram corpus reduced to the engine
tagset. Tagging finds the most likely explanation: the joint-probability
argmax over candidate assignments, computed with a Viterbi search whose
states are ordered tag pairs. Word-level trigram overrides pin their three
tags before the search.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable

TAGS = ("N", "p", "h", "V", "A", "v", "C", "P", "!", "r", "D")
UNKNOWN = "?"

#: Candidate set for words absent from MPOS: the open classes.
OPEN_CLASSES = ("N", "p", "V", "A", "v", "!")

#: MPOS code consolidation into the engine tagset (h entries are phrasal
#: and dropped; o/I/t/i fold into their parent classes).
MPOS_FOLD = {"t": "V", "i": "V", "o": "N", "I": "D", "h": None}


class ModelError(ValueError):
    pass


def _load_map(name: str) -> dict[str, str]:
    text = resources.files("diphonetts.data").joinpath(name).read_text("utf-8")
    mapping: dict[str, str] = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        mapping[fields[0]] = fields[1]
    return mapping


_CLAWS7: dict[str, str] | None = None
_BROWN: dict[str, str] | None = None


def reduce_claws7(tag: str) -> str:
    global _CLAWS7
    if _CLAWS7 is None:
        _CLAWS7 = _load_map("claws7_map.tsv")
    return _CLAWS7.get(tag.upper(), UNKNOWN)


def reduce_brown(tag: str) -> str:
    global _BROWN
    if _BROWN is None:
        _BROWN = _load_map("brown_map.tsv")
    t = tag.upper().rstrip("*")
    t = t.split("-")[0].split("+")[0]
    return _BROWN.get(t, UNKNOWN)


@dataclass
class TrigramModel:
    trigrams: Counter = field(default_factory=Counter)
    bigrams: Counter = field(default_factory=Counter)
    overrides: dict[tuple[str, str, str], tuple[str, str, str]] = field(
        default_factory=dict
    )
    skipped_rows: int = 0

    def save(self, stream: IO[str]) -> None:
        stream.write("# trigram model; bigrams marginalized from trigrams "
                     "unless a bigram source was supplied\n")
        for (a, b, c), n in sorted(self.trigrams.items()):
            stream.write(f"T\t{a}\t{b}\t{c}\t{n}\n")
        for (a, b), n in sorted(self.bigrams.items()):
            stream.write(f"B\t{a}\t{b}\t{n}\n")
        for words, tags in sorted(self.overrides.items()):
            stream.write("O\t" + "\t".join(words) + "\t" + "\t".join(tags) + "\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "TrigramModel":
        model = cls()
        for lineno, raw in enumerate(stream, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            f = line.split("\t")
            try:
                if f[0] == "T":
                    model.trigrams[(f[1], f[2], f[3])] += int(f[4])
                elif f[0] == "B":
                    model.bigrams[(f[1], f[2])] += int(f[3])
                elif f[0] == "O":
                    model.overrides[(f[1], f[2], f[3])] = (f[4], f[5], f[6])
                else:
                    raise ValueError(f"unknown row type {f[0]!r}")
            except (IndexError, ValueError) as exc:
                raise ModelError(f"model line {lineno}: {exc}") from None
        return model


def build_model(stream: IO[str], reducer=reduce_claws7) -> TrigramModel:
    """Consolidate a tagged n-gram corpus (rows: frequency, words, tags).

    Tag strings are reduced to the engine tagset; trigrams containing an
    unmappable tag are not counted. Word trigrams are retained verbatim
    (uppercased) as overrides, keeping the highest-frequency tagging.
    Bigram counts are marginalized from the trigrams.
    """
    model = TrigramModel()
    best_override: dict[tuple[str, str, str], int] = {}
    for raw in stream:
        line = raw.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 3:
            model.skipped_rows += 1
            continue
        try:
            freq = int(fields[0].replace(",", ""))
        except ValueError:
            model.skipped_rows += 1
            continue
        words = fields[1].split()
        tags = fields[2].split()
        if len(words) != 3 or len(tags) != 3:
            model.skipped_rows += 1
            continue
        reduced = tuple(reducer(t) for t in tags)
        if UNKNOWN in reduced:
            model.skipped_rows += 1
            continue
        model.trigrams[reduced] += freq
        key = tuple(w.upper() for w in words)
        if freq > best_override.get(key, 0):
            best_override[key] = freq
            model.overrides[key] = reduced
    for (a, b, c), n in model.trigrams.items():
        model.bigrams[(a, b)] += n
    return model


def candidate_tags(word: str, poslex) -> list[str]:
    """Ordered candidate tag list for a word (never empty).

    MPOS codes are folded into the engine tagset preserving order; unknown
    words get the open classes; entirely numerical tokens are nouns.
    """
    if word and all(c in "0123456789.," for c in word) and any(
        c.isdigit() for c in word
    ):
        return ["N"]
    codes = poslex.codes(word) if poslex is not None else None
    if not codes:
        return list(OPEN_CLASSES)
    out: list[str] = []
    for c in codes:
        tag = MPOS_FOLD.get(c, c)
        if tag is None or tag not in TAGS:
            continue
        if tag not in out:
            out.append(tag)
    return out or list(OPEN_CLASSES)


def _log_bigram(model: TrigramModel, pair: tuple[str, str],
                pairs: list[tuple[str, str]]) -> float:
    denom = sum(model.bigrams.get(p, 0) for p in pairs)
    if denom == 0:
        return -math.log(len(pairs))
    n = model.bigrams.get(pair, 0)
    return -math.inf if n == 0 else math.log(n / denom)


def _log_transition(model: TrigramModel, t1: str, t2: str, t3: str,
                    cands: list[str]) -> float:
    denom = sum(model.trigrams.get((t1, t2, t), 0) for t in cands)
    if denom == 0:
        return -math.log(len(cands))
    n = model.trigrams.get((t1, t2, t3), 0)
    return -math.inf if n == 0 else math.log(n / denom)


def _apply_overrides(words: list[str], cands: list[list[str]],
                     model: TrigramModel) -> None:
    upper = [w.upper() for w in words]
    for i in range(len(words) - 2):
        key = (upper[i], upper[i + 1], upper[i + 2])
        tags = model.overrides.get(key)
        if tags:
            for k in range(3):
                cands[i + k] = [tags[k]]


def tag_sentence(words: list[str], model: TrigramModel, poslex,
                 use_overrides: bool = True) -> list[str]:
    """Most likely tag per word. Deterministic; ties prefer earlier
    candidates (MPOS order), earliest word first."""
    if not words:
        return []
    cands = [candidate_tags(w, poslex) for w in words]
    if use_overrides and len(words) >= 3:
        _apply_overrides(words, cands, model)
    n = len(words)
    if n == 1:
        return [cands[0][0]]
    pairs = [(a, b) for a in cands[0] for b in cands[1]]
    if n == 2:
        best = max(
            range(len(pairs)),
            key=lambda i: (_log_bigram(model, pairs[i], pairs), -i),
        )
        return list(pairs[best])
    # Viterbi over states = (tag of word k-1, tag of word k). Each state
    # keeps (logprob, candidate-index path) so exact ties resolve to the
    # lexicographically earliest path in candidate order.
    idx = [{t: i for i, t in enumerate(c)} for c in cands]
    layer: dict[tuple[str, str], tuple[float, tuple[int, ...]]] = {}
    for a, b in pairs:
        lp = _log_bigram(model, (a, b), pairs)
        key = (idx[0][a], idx[1][b])
        layer[(a, b)] = (lp, key)
    for k in range(2, n):
        nxt: dict[tuple[str, str], tuple[float, tuple[int, ...]]] = {}
        for t3 in cands[k]:
            for (t1, t2), (lp, path) in layer.items():
                if lp == -math.inf:
                    continue
                cand_lp = lp + _log_transition(model, t1, t2, t3, cands[k])
                cand = (cand_lp, path + (idx[k][t3],))
                cur = nxt.get((t2, t3))
                if cur is None or cand_lp > cur[0] or (
                    cand_lp == cur[0] and cand[1] < cur[1]
                ):
                    nxt[(t2, t3)] = cand
        if not nxt:
            # Every path hit a zero-probability transition; restart
            # uniformly, keeping the earliest-candidate prefix.
            prefix = min(path for _, path in layer.values())
            for t3 in cands[k]:
                t2 = cands[k - 1][prefix[-1]] if k >= 1 else cands[k - 1][0]
                nxt[(t2, t3)] = (0.0, prefix + (idx[k][t3],))
        layer = nxt
    _, best_path = max(layer.values(), key=lambda v: (v[0], tuple(-i for i in v[1])))
    return [cands[k][i] for k, i in enumerate(best_path)]


def brute_force_tags(words: list[str], model: TrigramModel, poslex,
                     use_overrides: bool = True) -> list[str]:
    """Independent oracle: enumerate every candidate assignment and take the
    joint-probability argmax with the same tie-break. Exponential."""
    from itertools import product

    if not words:
        return []
    cands = [candidate_tags(w, poslex) for w in words]
    if use_overrides and len(words) >= 3:
        _apply_overrides(words, cands, model)
    n = len(words)
    if n == 1:
        return [cands[0][0]]
    pairs = [(a, b) for a in cands[0] for b in cands[1]]
    idx = [{t: i for i, t in enumerate(c)} for c in cands]
    best: tuple[float, tuple[int, ...]] | None = None
    best_tags: list[str] | None = None
    for assign in product(*cands):
        lp = _log_bigram(model, (assign[0], assign[1]), pairs)
        for k in range(2, n):
            if lp == -math.inf:
                break
            lp += _log_transition(
                model, assign[k - 2], assign[k - 1], assign[k], cands[k]
            )
        path = tuple(idx[k][t] for k, t in enumerate(assign))
        if best is None or lp > best[0] or (lp == best[0] and path < best[1]):
            best = (lp, path)
            best_tags = list(assign)
    assert best_tags is not None
    return best_tags


def split_tagged_brown(stream: Iterable[str]) -> Iterable[list[tuple[str, str]]]:
    """Yield sentences of (word, brown_tag) from Brown-format text."""
    sentence: list[tuple[str, str]] = []
    for raw in stream:
        for token in raw.split():
            word, _, tag = token.rpartition("/")
            if not word or not tag:
                continue
            sentence.append((word, tag))
            if tag in {".", "?", "!"} or word in {".", "?", "!"}:
                if sentence:
                    yield sentence
                sentence = []
    if sentence:
        yield sentence


def evaluate_brown(stream: Iterable[str], model: TrigramModel, poslex,
                   use_overrides: bool = True) -> dict[str, float]:
    """Word-level accuracy on a Brown-format tagged corpus.

    Scored over tokens whose gold tag reduces to a known engine tag;
    punctuation tokens are untagged and skipped.
    """
    correct = 0
    total = 0
    for sentence in split_tagged_brown(stream):
        words = [w for w, t in sentence if any(c.isalnum() for c in w)]
        gold = [reduce_brown(t) for w, t in sentence if any(c.isalnum() for c in w)]
        if not words:
            continue
        predicted = tag_sentence(words, model, poslex, use_overrides)
        for p, g in zip(predicted, gold):
            if g == UNKNOWN:
                continue
            total += 1
            if p == g:
                correct += 1
    return {
        "correct": correct,
        "total": total,
        "accuracy": correct / total if total else 0.0,
    }
