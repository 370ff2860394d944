"""Corpus-trained grapheme-to-phoneme conversion.

Training aligns every dictionary word with its pronunciation (m-to-n
co-segmentation), tallies letter-cluster/phone-cluster correspondences
("graphones") with empirical confidences, and prunes clusters that can never
win. Decoding builds a DAG over the inter-letter positions of the input word
and takes the shortest path under -log(confidence) edge weights, which is
the maximum-product decomposition, in time linear in word length.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable

from . import phones

# Letters that usually carry vowel-like phones ("r" included because ER is
# co-articulated with it).
VOWELISH_LETTERS = frozenset("aeiouwyr")

# Raw-Arpabet phones on the vowel side of the alignment split.
VOWELISH_PHONES = frozenset(
    [
        "AA", "AE", "AH", "AO", "EH", "ER", "IH", "IY", "UH", "UW",
        "AW", "AY", "EY", "OW", "OY", "W", "Y", "R",
    ]
)

MAX_GRAPHEME_LETTERS = 4
START_TOKEN = "("
END_TOKEN = ")"

Segment = tuple[str, tuple[str, ...]]


class G2PError(ValueError):
    pass


@dataclass
class AlignedWord:
    word: str
    segments: list[Segment]

    def valid(self) -> bool:
        letters = "".join(g for g, _ in self.segments)
        phs = tuple(p for _, ps in self.segments for p in ps)
        return letters == self.word and len(self.segments) > 0 and all(
            g and ps for g, ps in self.segments
        ) and phs == tuple(p for _, ps in self.segments for p in ps)


def _runs(items: list[str], is_vowelish) -> list[list[str]]:
    runs: list[list[str]] = []
    for item in items:
        v = is_vowelish(item)
        if runs and runs[-1] and is_vowelish(runs[-1][0]) == v:
            runs[-1].append(item)
        else:
            runs.append([item])
    return runs


def initial_align(word: str, phone_seq: list[str]) -> AlignedWord | None:
    """First-pass co-segmentation by vowelish/consonantish run matching.

    Returns None when the run counts differ (the word is deferred to the
    second pass). Expects a lowercase alphabetic word and a stress-stripped
    pronunciation.
    """
    letter_runs = _runs(list(word), lambda c: c in VOWELISH_LETTERS)
    phone_runs = _runs(list(phone_seq), lambda p: p in VOWELISH_PHONES)
    if len(letter_runs) != len(phone_runs):
        return None
    first_letter_v = letter_runs[0][0] in VOWELISH_LETTERS
    first_phone_v = phone_runs[0][0] in VOWELISH_PHONES
    if first_letter_v != first_phone_v:
        return None
    segments = [
        ("".join(lr), tuple(pr)) for lr, pr in zip(letter_runs, phone_runs)
    ]
    return AlignedWord(word, segments)


ClusterCounts = dict[str, dict[tuple[str, ...], int]]


def cluster_counts(aligned: Iterable[AlignedWord]) -> ClusterCounts:
    """Pronunciation counts for every segment run of at most 4 letters.

    No boundary tokens here; pronunciations seen less than 10% as often as
    the cluster's most common one are dropped, leaving the "known
    pronunciations" used by the refinement splitter.
    """
    counts: ClusterCounts = defaultdict(Counter)
    for aw in aligned:
        segs = aw.segments
        for i in range(len(segs)):
            letters = ""
            phone_list: list[str] = []
            for j in range(i, len(segs)):
                letters += segs[j][0]
                phone_list.extend(segs[j][1])
                if len(letters) > MAX_GRAPHEME_LETTERS:
                    break
                counts[letters][tuple(phone_list)] += 1
    pruned: ClusterCounts = {}
    for letters, per_pron in counts.items():
        top = max(per_pron.values())
        keep = {p: n for p, n in per_pron.items() if n * 10 >= top}
        pruned[letters] = keep
    return pruned


def _split_segment_once(seg: Segment, known: ClusterCounts, from_end: bool) -> list[Segment] | None:
    """Try one split of a segment against known cluster pronunciations.

    Takes the largest sub-cluster from the chosen side (never the whole
    segment) and splits when one of its known pronunciations matches that
    side of the phone cluster, leaving at least one phone for the remainder.
    """
    letters, phs = seg
    if len(letters) < 2 or len(phs) < 2:
        return None
    max_take = min(len(letters) - 1, MAX_GRAPHEME_LETTERS)
    for size in range(max_take, 0, -1):
        part = letters[-size:] if from_end else letters[:size]
        candidates = known.get(part)
        if not candidates:
            continue
        # Prefer longer phone matches, then more frequent ones.
        for pron in sorted(candidates, key=lambda p: (-len(p), -candidates[p])):
            n = len(pron)
            if n == 0 or n >= len(phs):
                continue
            if from_end and tuple(phs[-n:]) == pron:
                return [(letters[:-size], tuple(phs[:-n])), (part, pron)]
            if not from_end and tuple(phs[:n]) == pron:
                return [(part, pron), (letters[size:], tuple(phs[n:]))]
    return None


def minimise_segments(segments: list[Segment], known: ClusterCounts) -> list[Segment]:
    """Iteratively split segments from the end, then the beginning, until
    nothing splits further or a side has one letter or one phoneme."""
    work = list(segments)
    for from_end in (True, False):
        changed = True
        while changed:
            changed = False
            out: list[Segment] = []
            for seg in work:
                split = _split_segment_once(seg, known, from_end)
                if split is None:
                    out.append(seg)
                else:
                    # Recurse into the split halves on a later sweep.
                    out.extend(split)
                    changed = True
            work = out
    return work


def refine_alignment(
    first_pass: list[AlignedWord],
    failures: list[tuple[str, list[str]]],
) -> tuple[list[AlignedWord], int]:
    """Minimise first-pass alignments, then align the failed words with the
    same splitting machinery. Returns (corpus, unresolved_count); words whose
    estimate stays a single unsplittable multi-letter segment are dropped."""
    known = cluster_counts(first_pass)
    refined = [
        AlignedWord(aw.word, minimise_segments(aw.segments, known))
        for aw in first_pass
    ]
    unresolved = 0
    for word, phone_seq in failures:
        whole: list[Segment] = [(word, tuple(phone_seq))]
        segments = minimise_segments(whole, known)
        if len(segments) == 1 and len(word) > 1 and len(phone_seq) > 1:
            unresolved += 1
            continue
        refined.append(AlignedWord(word, segments))
    return refined, unresolved


@dataclass
class Graphone:
    graphemes: str
    phonemes: tuple[str, ...]
    confidence: float


class GraphoneTable:
    """Lookup from a letter cluster (optionally boundary-tagged) to its most
    confident pronunciation."""

    def __init__(self) -> None:
        self.entries: dict[str, Graphone] = {}
        self.report: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: str) -> Graphone | None:
        return self.entries.get(key)

    def save(self, stream: IO[str]) -> None:
        for key in sorted(self.entries):
            g = self.entries[key]
            stream.write(f"{key}\t{' '.join(g.phonemes)}\t{g.confidence:.10g}\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "GraphoneTable":
        table = cls()
        for lineno, raw in enumerate(stream, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise G2PError(f"graphone table line {lineno}: expected 3 fields")
            key, pron, conf = fields
            table.entries[key] = Graphone(key, tuple(pron.split()), float(conf))
        return table


def _tally_runs(corpus: Iterable[AlignedWord]) -> ClusterCounts:
    counts: ClusterCounts = defaultdict(Counter)
    for aw in corpus:
        segs = aw.segments
        last = len(segs) - 1
        for i in range(len(segs)):
            letters = ""
            phone_list: list[str] = []
            for j in range(i, len(segs)):
                letters += segs[j][0]
                phone_list.extend(segs[j][1])
                if len(letters) > MAX_GRAPHEME_LETTERS:
                    break
                pron = tuple(phone_list)
                counts[letters][pron] += 1
                # Boundary-token variants; never both tokens on one key.
                if i == 0:
                    counts[START_TOKEN + letters][pron] += 1
                if j == last:
                    counts[letters + END_TOKEN][pron] += 1
    return counts


def _best_decomposition(key: str, table: dict[str, Graphone]) -> float:
    """Highest joint confidence over decompositions of `key` into at least
    two smaller table keys (boundary tokens stay on their edge pieces)."""
    prefix = START_TOKEN if key.startswith(START_TOKEN) else ""
    suffix = END_TOKEN if key.endswith(END_TOKEN) else ""
    letters = key[len(prefix):len(key) - len(suffix)]
    n = len(letters)
    # best[i] = max product covering letters[:i]
    best = [0.0] * (n + 1)
    best[0] = 1.0
    for i in range(1, n + 1):
        for j in range(max(0, i - MAX_GRAPHEME_LETTERS), i):
            if best[j] == 0.0:
                continue
            piece = letters[j:i]
            if j == 0 and prefix:
                piece = prefix + piece
            if i == n and suffix:
                piece = piece + suffix
            if piece == key:
                continue
            g = table.get(piece)
            if g is None:
                continue
            cand = best[j] * g.confidence
            if cand > best[i]:
                best[i] = cand
    return best[n]


def train(corpus: list[AlignedWord]) -> GraphoneTable:
    """Build the graphone confidence table from an aligned corpus.

    Keeps the argmax pronunciation per letter cluster with its relative
    frequency, then drops clusters whose best decomposition into smaller
    clusters is strictly more confident (they can never be chosen).
    """
    if not corpus:
        raise G2PError("empty aligned corpus")
    counts = _tally_runs(corpus)
    table = GraphoneTable()
    for key, per_pron in counts.items():
        total = sum(per_pron.values())
        pron, n = max(per_pron.items(), key=lambda kv: (kv[1], kv[0]))
        table.entries[key] = Graphone(key, pron, n / total)
    redundant = [
        key
        for key, g in table.entries.items()
        if len(key.strip(START_TOKEN + END_TOKEN)) > 1
        and _best_decomposition(key, table.entries) > g.confidence
    ]
    for key in redundant:
        del table.entries[key]
    table.report = {
        "graphones_before_pruning": len(counts),
        "graphones_redundant": len(redundant),
        "graphones_retained": len(table.entries),
    }
    return table


def _edge_key(word: str, i: int, j: int, L: int) -> tuple[str, ...]:
    """Candidate table keys for the span word[i:j]."""
    piece = word[i:j]
    keys = []
    if i == 0:
        keys.append(START_TOKEN + piece)
    if j == L:
        keys.append(piece + END_TOKEN)
    keys.append(piece)
    return tuple(keys)


def _best_edge(table: "GraphoneTable", word: str, i: int, j: int,
               L: int) -> Graphone | None:
    """Most confident graphone covering the span (all boundary variants are
    parallel edges in the graph; ties keep the listed key order)."""
    best = None
    for key in _edge_key(word, i, j, L):
        g = table.get(key)
        if g is not None and (best is None or g.confidence > best.confidence):
            best = g
    return best


def decode_path(table: GraphoneTable, word: str) -> list[tuple[int, int, Graphone]] | None:
    """Shortest-path decomposition of `word`; None when some prefix has no
    covering graphone. Ties prefer fewer segments, then the earliest split
    positions."""
    L = len(word)
    INF = math.inf
    # Per node: (cost, segments, node-path tuple, incoming edge graphone list)
    best_cost = [INF] * (L + 1)
    best_segs = [0] * (L + 1)
    best_path: list[tuple[int, ...] | None] = [None] * (L + 1)
    best_edges: list[list[tuple[int, int, Graphone]] | None] = [None] * (L + 1)
    best_cost[0] = 0.0
    best_path[0] = (0,)
    best_edges[0] = []
    for j in range(1, L + 1):
        for i in range(max(0, j - MAX_GRAPHEME_LETTERS), j):
            if best_cost[i] == INF:
                continue
            graphone = _best_edge(table, word, i, j, L)
            if graphone is None:
                continue
            cost = best_cost[i] + -math.log(graphone.confidence)
            segs = best_segs[i] + 1
            path = best_path[i] + (j,)
            cand = (cost, segs, path)
            if (
                best_cost[j] == INF
                or cand < (best_cost[j], best_segs[j], best_path[j])
            ):
                best_cost[j], best_segs[j], best_path[j] = cand
                best_edges[j] = best_edges[i] + [(i, j, graphone)]
    if best_cost[L] == INF:
        return None
    return best_edges[L]


def collapse_repeats(seq: list[str]) -> list[str]:
    out: list[str] = []
    for p in seq:
        if out and out[-1] == p:
            continue
        out.append(p)
    return out


@dataclass
class DecodeResult:
    phones: list[str]
    path: list[tuple[int, int, str]] = field(default_factory=list)
    fallback_letters: list[str] = field(default_factory=list)


def decode(table: GraphoneTable, word: str) -> DecodeResult:
    """Pronounce an alphabetic word; vowels come out with stress 0.

    Words with an uncoverable span degrade to per-letter lookup; letters
    with no single-letter graphone map to silence and are reported.
    """
    w = word.lower()
    if not w or not w.isalpha():
        raise G2PError(f"decode expects a nonempty alphabetic word: {word!r}")
    edges = decode_path(table, w)
    fallback: list[str] = []
    if edges is not None:
        raw = [p for _, _, g in edges for p in g.phonemes]
        path = [(i, j, g.graphemes) for i, j, g in edges]
    else:
        raw = []
        path = []
        for k, letter in enumerate(w):
            g = table.get(letter)
            if g is None:
                raw.append(phones.SILENCE)
                fallback.append(letter)
            else:
                raw.extend(g.phonemes)
            path.append((k, k + 1, letter))
    collapsed = collapse_repeats(raw)
    out = [p + "0" if p in phones.RAW_VOWELS else p for p in collapsed]
    return DecodeResult(out, path, fallback)


def brute_force_decode(table: GraphoneTable, word: str) -> list[str] | None:
    """Independent oracle: enumerate all 2^(L-1) segmentations and pick the
    maximum-product decomposition (compared in log space, left to right,
    with the decoder's tie-break). Exponential; use on short words only."""
    w = word.lower()
    L = len(w)
    best: tuple[float, int, tuple[int, ...]] | None = None
    best_phones: list[str] | None = None
    for mask in range(1 << (L - 1)) if L else []:
        bounds = [0] + [k + 1 for k in range(L - 1) if mask & (1 << k)] + [L]
        if any(b - a > MAX_GRAPHEME_LETTERS for a, b in zip(bounds, bounds[1:])):
            continue
        cost = 0.0
        raw: list[str] = []
        ok = True
        for a, b in zip(bounds, bounds[1:]):
            graphone = _best_edge(table, w, a, b, L)
            if graphone is None:
                ok = False
                break
            cost = cost + -math.log(graphone.confidence)
            raw.extend(graphone.phonemes)
        if not ok:
            continue
        cand = (cost, len(bounds) - 1, tuple(bounds))
        if best is None or cand < best:
            best = cand
            best_phones = raw
    if best_phones is None:
        return None
    collapsed = collapse_repeats(best_phones)
    return [p + "0" if p in phones.RAW_VOWELS else p for p in collapsed]


def align_corpus(
    items: Iterable[tuple[str, list[str]]],
) -> tuple[list[AlignedWord], int, int]:
    """Run both alignment passes over (word, stress-stripped phones) items.

    Returns (aligned corpus, first-pass match count, unresolved count).
    """
    first: list[AlignedWord] = []
    failures: list[tuple[str, list[str]]] = []
    for word, phone_seq in items:
        aw = initial_align(word, phone_seq)
        if aw is not None:
            first.append(aw)
        else:
            failures.append((word, phone_seq))
    corpus, unresolved = refine_alignment(first, failures)
    return corpus, len(first), unresolved


def training_items(lex) -> list[tuple[str, list[str]]]:
    """Alphabetic headwords of a pronunciation lexicon with their first
    pronunciation, lowercased and stress-stripped."""
    items = []
    for word in sorted(lex.headwords()):
        if not word.isalpha():
            continue
        pron = [phones.strip_stress(p) for p in lex.entries[word].pronunciations[0]]
        items.append((word.lower(), pron))
    return items


def train_from_lexicon(lex) -> tuple[GraphoneTable, dict[str, int]]:
    items = training_items(lex)
    corpus, matched, unresolved = align_corpus(items)
    table = train(corpus)
    stats = dict(table.report)
    stats.update(
        {
            "words": len(items),
            "first_pass_matched": matched,
            "unresolved_dropped": unresolved,
        }
    )
    return table, stats


@dataclass
class AccuracyReport:
    exact: int = 0
    one_off: int = 0
    missing: int = 0
    extra: int = 0
    incorrect: int = 0

    @property
    def total(self) -> int:
        return self.exact + self.one_off + self.missing + self.extra + self.incorrect

    @property
    def minor(self) -> int:
        return self.one_off + self.missing + self.extra

    def percentages(self) -> dict[str, float]:
        t = self.total or 1
        return {
            "exact": 100.0 * self.exact / t,
            "one_off": 100.0 * self.one_off / t,
            "missing": 100.0 * self.missing / t,
            "extra": 100.0 * self.extra / t,
            "minor": 100.0 * self.minor / t,
            "incorrect": 100.0 * self.incorrect / t,
        }


def _classify(pred: list[str], gold: list[str]) -> str:
    if pred == gold:
        return "exact"
    lp, lg = len(pred), len(gold)
    if lp == lg and sum(a != b for a, b in zip(pred, gold)) == 1:
        return "one_off"
    if lp + 1 == lg:
        # one deletion from gold reproduces pred
        for k in range(lg):
            if pred == gold[:k] + gold[k + 1:]:
                return "missing"
    if lp == lg + 1:
        for k in range(lp):
            if pred[:k] + pred[k + 1:] == gold:
                return "extra"
    return "incorrect"


def evaluate(table: GraphoneTable, lex) -> AccuracyReport:
    """Decode every alphabetic headword and classify against its
    pronunciations (stress ignored, best-matching variant)."""
    report = AccuracyReport()
    rank = {"exact": 0, "one_off": 1, "missing": 2, "extra": 3, "incorrect": 4}
    for word in lex.headwords():
        if not word.isalpha():
            continue
        pred = [phones.strip_stress(p) for p in decode(table, word).phones]
        best = "incorrect"
        for pron in lex.entries[word].pronunciations:
            gold = collapse_repeats([phones.strip_stress(p) for p in pron])
            cls = _classify(pred, gold)
            if rank[cls] < rank[best]:
                best = cls
            if best == "exact":
                break
        setattr(report, best, getattr(report, best) + 1)
    return report
