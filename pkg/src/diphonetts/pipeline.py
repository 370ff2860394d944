"""End-to-end synthesis: text to tokens, tags, phones, diphones, waveform.

Pronunciation priority per word: homograph selector (needs a tag), lexicon
first variant, number/mixed handling, grapheme-to-phoneme fallback. Phones
are diphthong-decomposed, silence-delimited, paired into diphones, shifted
per the prosody plan, and concatenated with phase-aligned crossfades.
"""

from __future__ import annotations

import io
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import g2p, lexicon, phones, postag, prosody, signal_ops, textnorm
from .audio_io import SAMPLE_RATE
from .extraction import DiphoneBank
from .phones import SILENCE, Category, category
from .textnorm import Token, TokenKind

#: Synthetic bridge inserted for diphones absent from the bank.
SUBSTITUTE_GAP_S = 0.03


def _data_text(name: str) -> str:
    return resources.files("diphonetts.data").joinpath(name).read_text("utf-8")


@dataclass
class Resources:
    """Loaded models and lexica shared by every synthesis call."""

    pronunciations: lexicon.PronunciationLexicon
    poslex: lexicon.PosLexicon
    tagmodel: postag.TrigramModel
    graphones: g2p.GraphoneTable
    frequencies: dict[str, float]

    @classmethod
    def bundled(cls) -> "Resources":
        lex = lexicon.load_cmudict(io.StringIO(_data_text("lexicon.dict")))
        lexicon.load_homographs(io.StringIO(_data_text("homographs.tsv")), lex)
        raw = lexicon.load_mpos(io.StringIO(_data_text("mpos.txt")))
        poslex, _ = lexicon.dedup_case_variants(raw)
        tagmodel = postag.TrigramModel.load(
            io.StringIO(_data_text("trigram_model.tsv"))
        )
        table, _ = g2p.train_from_lexicon(lex)
        freqs, _ = prosody.load_frequency_table(
            io.StringIO(_data_text("word_frequencies.tsv"))
        )
        return cls(lex, poslex, tagmodel, table, freqs)


@dataclass
class PreprocessedToken:
    text: str
    kind: str
    tag: str | None
    pronunciation: list[str]


@dataclass
class SynthesisReport:
    clip_count: int = 0
    substitutions: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    audio_seconds: float = 0.0
    wall_seconds: float = 0.0

    @property
    def real_time_factor(self) -> float:
        return self.wall_seconds / self.audio_seconds if self.audio_seconds else 0.0


class Engine:
    def __init__(self, res: Resources, bank: DiphoneBank | None = None,
                 settings: prosody.ProsodySettings | None = None,
                 alternate_banks: dict[str, DiphoneBank] | None = None) -> None:
        self.res = res
        self.bank = bank
        self.settings = settings or prosody.ProsodySettings()
        self.alternate_banks = alternate_banks or {}

    # ------------------------------------------------------------------
    # Front end
    # ------------------------------------------------------------------

    def tag_tokens(self, tokens: list[Token]) -> list[str | None]:
        """Tag per token; punctuation is invisible to the tagger."""
        tags: list[str | None] = [None] * len(tokens)
        for sentence in textnorm.sentences(tokens):
            indices = [
                i for i, t in enumerate(tokens)
                if t.sentence_index == sentence[0].sentence_index
                and t.kind is not TokenKind.PUNCT
            ]
            words = [tokens[i].text for i in indices]
            if not words:
                continue
            predicted = postag.tag_sentence(
                words, self.res.tagmodel, self.res.poslex
            )
            for i, tag in zip(indices, predicted):
                tags[i] = tag
        return tags

    def pronounce_word(self, word: str, tag: str | None = None) -> list[str]:
        """Lexicon lookup (homograph-aware) with G2P fallback."""
        found = self.res.pronunciations.lookup(word, tag)
        if found is not None:
            return found
        alpha = "".join(c for c in word if c.isalpha())
        if not alpha:
            return []
        return g2p.decode(self.res.graphones, alpha).phones

    def _pronounce_token(self, tok: Token, tag: str | None) -> list[str]:
        if tok.kind is TokenKind.PUNCT:
            return []
        if tok.kind is TokenKind.NUMBER:
            out: list[str] = []
            for word in textnorm.number_to_words(tok.text):
                for piece in word.split("-"):
                    out.extend(self.pronounce_word(piece))
            return out
        if tok.kind is TokenKind.MIXED:
            return textnorm.split_mixed(tok.text, self.pronounce_word)
        return self.pronounce_word(tok.text, tag)

    def pronounce(self, tokens: list[Token],
                  tags: list[str | None]) -> list[list[str]]:
        """Raw Arpabet pronunciation (stress digits kept) per token."""
        prons = [self._pronounce_token(t, tag) for t, tag in zip(tokens, tags)]
        # "the" picks its pre-vowel variant from the following sound.
        entry = self.res.pronunciations.get("THE")
        vowel_variant = None
        if entry:
            for i, pron in enumerate(entry.pronunciations):
                if phones.strip_stress(pron[-1]) == "IY":
                    vowel_variant = i
        if vowel_variant is not None:
            for i, tok in enumerate(tokens):
                if tok.kind is TokenKind.WORD and tok.text.upper() == "THE":
                    nxt = next(
                        (prons[j] for j in range(i + 1, len(tokens)) if prons[j]),
                        None,
                    )
                    if nxt and phones.is_vowel(nxt[0]):
                        prons[i] = list(entry.pronunciations[vowel_variant])
        return prons

    def preprocess(self, text: str) -> list[PreprocessedToken]:
        """Token / tag / pronunciation table for an input string."""
        tokens = textnorm.tokenize(text)
        tags = self.tag_tokens(tokens)
        prons = self.pronounce(tokens, tags)
        return [
            PreprocessedToken(t.text, t.kind.value, tag, pron)
            for t, tag, pron in zip(tokens, tags, prons)
        ]

    # ------------------------------------------------------------------
    # Diphone assembly
    # ------------------------------------------------------------------

    def _token_banks(self, tokens: list[Token]) -> list[DiphoneBank]:
        """Per-token bank honoring the bracketed-text alternate voices."""
        assert self.bank is not None
        opens = {"(": ")", "[": "]", "{": "}"}
        stack: list[DiphoneBank] = []
        out: list[DiphoneBank] = []
        for tok in tokens:
            if tok.kind is TokenKind.PUNCT:
                for c in tok.text:
                    if c in opens:
                        name = self.settings.bracket_banks.get(c)
                        bank = self.alternate_banks.get(name) if name else None
                        stack.append(bank or self.bank)
                    elif c in opens.values() and stack:
                        stack.pop()
                out.append(stack[-1] if stack else self.bank)
            else:
                out.append(stack[-1] if stack else self.bank)
        return out

    def to_diphones(self, tokens: list[Token], plan_: prosody.ProsodyPlan):
        """Emission list: diphone clips, stop bursts, and pauses.

        The phone chain is silence-delimited and restarts across pauses;
        adjacent identical phones merge. Stop-terminated pairs fall back to
        the first phone's silence-exit, stop/stop pairs to the burst alone.
        """
        assert self.bank is not None
        banks = self._token_banks(tokens)
        neutral = prosody.PhonePlan(SILENCE, 1.0, 1.0, 1.0)
        stream: list[tuple[prosody.PhonePlan, DiphoneBank]] = []
        emissions: list[dict] = []

        def flush() -> None:
            nonlocal stream
            chain = [(neutral, self.bank)] + stream + [(neutral, self.bank)]
            for (pa, bank_a), (pb, _) in zip(chain, chain[1:]):
                a, b = pa.phone, pb.phone
                spec = signal_ops.ShiftSpec(
                    volume=(pa.volume, pb.volume),
                    pitch=(pa.pitch, pb.pitch),
                    duration=(pa.duration, pb.duration),
                )
                if category(b) is Category.STOP:
                    if category(a) is Category.STOP:
                        emissions.append(
                            {"kind": "burst", "phone": a, "spec": spec, "bank": bank_a}
                        )
                    elif a != SILENCE:
                        emissions.append(
                            {"kind": "clip", "pair": (a, SILENCE), "spec": spec,
                             "bank": bank_a}
                        )
                elif b == SILENCE and category(a) is Category.STOP:
                    emissions.append(
                        {"kind": "burst", "phone": a, "spec": spec, "bank": bank_a}
                    )
                elif a == SILENCE and b == SILENCE:
                    continue
                else:
                    emissions.append(
                        {"kind": "clip", "pair": (a, b), "spec": spec,
                         "bank": bank_a}
                    )
            stream = []

        for index, tok in enumerate(tokens):
            if index in plan_.pauses:
                flush()
                emissions.append({"kind": "pause", "seconds": plan_.pauses[index]})
                continue
            for plan_entry in plan_.phone_plans[index]:
                if stream and stream[-1][0].phone == plan_entry.phone:
                    continue
                stream.append((plan_entry, banks[index]))
        flush()
        return emissions

    # ------------------------------------------------------------------
    # Waveform synthesis
    # ------------------------------------------------------------------

    def _render(self, emissions: list[dict],
                report: SynthesisReport) -> np.ndarray:
        assert self.bank is not None
        rate = self.bank.rate
        pieces: list[np.ndarray] = []
        boundaries: list[str] = []  # connective phone before each piece

        def add(piece: np.ndarray, connective: str) -> None:
            if len(piece) == 0:
                return
            pieces.append(np.asarray(piece, dtype=np.float64))
            boundaries.append(connective)

        previous_phone = SILENCE
        for em in emissions:
            if em["kind"] == "pause":
                add(np.zeros(int(round(em["seconds"] * rate))), SILENCE)
                previous_phone = SILENCE
                continue
            bank: DiphoneBank = em["bank"]
            if em["kind"] == "burst":
                clip = bank.bursts.get(em["phone"])
                if clip is None:
                    report.substitutions.append(f"burst {em['phone']} missing")
                    clip = np.zeros(int(round(SUBSTITUTE_GAP_S * rate)))
                    add(clip, SILENCE)
                else:
                    shifted, warns = signal_ops.shift_diphone(
                        clip, em["phone"], em["phone"], em["spec"],
                        bank.smoothing_ms, rate,
                    )
                    report.warnings.extend(warns)
                    add(shifted, previous_phone)
                report.clip_count += 1
                previous_phone = em["phone"]
                continue
            a, b = em["pair"]
            clip = bank.clips.get((a, b))
            if clip is None:
                report.substitutions.append(f"{a} {b}")
                exit_clip = bank.clips.get((a, SILENCE)) if a != SILENCE else None
                entry_clip = bank.clips.get((SILENCE, b)) if b != SILENCE else None
                if exit_clip is not None:
                    shifted, warns = signal_ops.shift_diphone(
                        exit_clip, a, SILENCE, em["spec"], bank.smoothing_ms, rate
                    )
                    report.warnings.extend(warns)
                    add(shifted, previous_phone)
                add(np.zeros(int(round(SUBSTITUTE_GAP_S * rate))), SILENCE)
                if entry_clip is not None:
                    shifted, warns = signal_ops.shift_diphone(
                        entry_clip, SILENCE, b, em["spec"], bank.smoothing_ms, rate
                    )
                    report.warnings.extend(warns)
                    add(shifted, SILENCE)
                report.clip_count += 1
                previous_phone = b
                continue
            shifted, warns = signal_ops.shift_diphone(
                clip, a, b, em["spec"], bank.smoothing_ms, rate
            )
            report.warnings.extend(warns)
            add(shifted, previous_phone)
            report.clip_count += 1
            previous_phone = b

        if not pieces:
            return np.zeros(0)

        # Chain assembly: compute offsets with phase-aligned overlaps, then
        # fade and sum every piece into one buffer.
        offsets = [0]
        for i in range(1, len(pieces)):
            overlap, warns = signal_ops.concat_overlap(
                pieces[i - 1], pieces[i], boundaries[i], rate
            )
            report.warnings.extend(warns)
            offsets.append(offsets[i - 1] + len(pieces[i - 1]) - overlap)
        total = max(o + len(p) for o, p in zip(offsets, pieces))
        out = np.zeros(total)
        for i, (o, piece) in enumerate(zip(offsets, pieces)):
            faded = piece
            head_overlap = (offsets[i - 1] + len(pieces[i - 1]) - o) if i else 0
            tail_overlap = (
                o + len(piece) - offsets[i + 1] if i + 1 < len(pieces) else 0
            )
            if head_overlap > 0 or tail_overlap > 0:
                faded = piece.copy()
                if head_overlap > 0:
                    fade = np.linspace(1.0, 0.0, head_overlap)
                    faded[:head_overlap] *= 1.0 - fade
                if tail_overlap > 0:
                    faded[len(piece) - tail_overlap:] *= np.linspace(
                        1.0, 0.0, tail_overlap
                    )
            out[o:o + len(piece)] += faded
        return out

    def _apply_word_overrides(self, tokens: list[Token],
                              plan_: prosody.ProsodyPlan,
                              overrides: list[dict]) -> None:
        word_i = 0
        clamps = self.settings.clamps
        for index, tok in enumerate(tokens):
            if tok.kind is TokenKind.PUNCT:
                continue
            if word_i >= len(overrides):
                break
            ov = overrides[word_i] or {}
            word_i += 1
            vol = float(ov.get("volume", 1.0))
            dur = float(ov.get("duration", 1.0))
            ratio = prosody.steps_to_ratio(float(ov.get("pitch_steps", 0.0)))
            for p in plan_.phone_plans[index]:
                p.volume = min(max(p.volume * vol, clamps["volume"][0]),
                               clamps["volume"][1])
                p.duration = min(max(p.duration * dur, clamps["duration"][0]),
                                 clamps["duration"][1])
                p.pitch = min(max(p.pitch * ratio, clamps["pitch"][0]),
                              clamps["pitch"][1])

    def synthesize(self, text: str, seed: int | None = None,
                   word_overrides: list[dict] | None = None,
                   ) -> tuple[np.ndarray, SynthesisReport]:
        """Full pipeline; deterministic for a fixed seed.

        `word_overrides` applies manual per-word overlay on top of the
        computed plan: one entry per non-punctuation token with optional
        volume/duration factors and a pitch shift in twelve-tone steps.
        """
        if self.bank is None:
            raise ValueError("no diphone bank loaded")
        report = SynthesisReport()
        t0 = time.perf_counter()
        tokens = textnorm.tokenize(text)
        if not tokens:
            report.wall_seconds = time.perf_counter() - t0
            return np.zeros(0), report
        tags = self.tag_tokens(tokens)
        prons = self.pronounce(tokens, tags)
        decomposed = [phones.decompose_diphthongs(p) for p in prons]
        rng = random.Random(self.settings.seed if seed is None else seed)
        plan_ = prosody.plan(
            tokens, tags, decomposed, self.settings, self.res.frequencies, rng
        )
        if word_overrides:
            self._apply_word_overrides(tokens, plan_, word_overrides)
        emissions = self.to_diphones(tokens, plan_)
        wav = self._render(emissions, report)
        report.audio_seconds = len(wav) / self.bank.rate
        report.wall_seconds = time.perf_counter() - t0
        return wav, report


def load_engine(bank_dir: str | Path | None = None,
                settings_path: str | Path | None = None) -> Engine:
    res = Resources.bundled()
    bank = DiphoneBank.load(bank_dir) if bank_dir else None
    settings = prosody.ProsodySettings()
    if settings_path:
        with open(settings_path, encoding="utf-8") as f:
            settings = prosody.ProsodySettings.load(f)
    alternates = {}
    for name in set(settings.bracket_banks.values()):
        if name and Path(name).is_dir():
            alternates[name] = DiphoneBank.load(name)
    return Engine(res, bank, settings, alternates)
