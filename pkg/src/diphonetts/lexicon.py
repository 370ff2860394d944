"""Pronunciation and part-of-speech lexica.

Loads CMUdict-format pronouncing dictionaries ("WORD(n)  PH PH ..."),
MPOS-format part-of-speech lists ("word×CODES"), and the homograph sidecar
mapping (word, tag) pairs to pronunciation variants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from . import phones

MPOS_CODES = "NphVtiAvCP!rDIo"

_ENTRY_RE = re.compile(r"^(\S+?)(?:\((\d+)\))?$")


class LexiconError(ValueError):
    pass


@dataclass
class LexiconEntry:
    headword: str
    pronunciations: list[list[str]] = field(default_factory=list)
    homograph_selector: dict[str, int] | None = None


class PronunciationLexicon:
    def __init__(self) -> None:
        self.entries: dict[str, LexiconEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word.upper() in self.entries

    def headwords(self) -> Iterable[str]:
        return self.entries.keys()

    def get(self, word: str) -> LexiconEntry | None:
        return self.entries.get(word.upper())

    def lookup(self, word: str, pos: str | None = None) -> list[str] | None:
        """Pronunciation for `word`, honoring the homograph selector.

        With no usable POS information the first-listed variant wins.
        Returns None when the word is unknown (the caller falls back to
        grapheme-to-phoneme conversion).
        """
        entry = self.entries.get(word.upper())
        if entry is None:
            return None
        index = 0
        if pos is not None and entry.homograph_selector:
            index = entry.homograph_selector.get(pos, 0)
        return list(entry.pronunciations[index])

    def add(self, word: str, variant: int, phone_seq: list[str]) -> None:
        entry = self.entries.setdefault(word.upper(), LexiconEntry(word.upper()))
        if variant != len(entry.pronunciations):
            raise LexiconError(
                f"variant {variant} of {word!r} out of order "
                f"(have {len(entry.pronunciations)})"
            )
        entry.pronunciations.append(phone_seq)


def load_cmudict(stream: IO[str]) -> PronunciationLexicon:
    """Parse CMUdict plaintext. Comment lines (';;;') are ignored."""
    lex = PronunciationLexicon()
    seen: set[tuple[str, int]] = set()
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith(";;;") or line.startswith("##"):
            continue
        parts = line.split()
        m = _ENTRY_RE.match(parts[0])
        if m is None or len(parts) < 2:
            raise LexiconError(f"line {lineno}: malformed entry: {line!r}")
        word = m.group(1).upper()
        variant = int(m.group(2)) if m.group(2) else 0
        if (word, variant) in seen:
            raise LexiconError(f"line {lineno}: duplicate entry {word}({variant})")
        seen.add((word, variant))
        phone_seq = parts[1:]
        for symbol in phone_seq:
            base = phones.strip_stress(symbol)
            if base not in phones._RAW_SYMBOLS and base not in phones.PHONES:
                raise LexiconError(
                    f"line {lineno}: unknown phone {symbol!r} in {word!r}"
                )
        try:
            lex.add(word, variant, phone_seq)
        except LexiconError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
    return lex


def load_homographs(stream: IO[str], lex: PronunciationLexicon) -> None:
    """Attach (word, tag) -> variant selectors from a TSV sidecar."""
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise LexiconError(f"homographs line {lineno}: expected 3 fields")
        word, tag, variant = fields[0].upper(), fields[1], int(fields[2])
        entry = lex.get(word)
        if entry is None:
            raise LexiconError(f"homographs line {lineno}: {word!r} not in lexicon")
        if variant >= len(entry.pronunciations):
            raise LexiconError(
                f"homographs line {lineno}: variant {variant} out of range"
            )
        if entry.homograph_selector is None:
            entry.homograph_selector = {}
        entry.homograph_selector[tag] = variant


def dump_cmudict(lex: PronunciationLexicon, stream: IO[str]) -> None:
    for word in sorted(lex.entries):
        entry = lex.entries[word]
        for i, pron in enumerate(entry.pronunciations):
            suffix = f"({i})" if i else ""
            stream.write(f"{word}{suffix}  {' '.join(pron)}\n")


@dataclass
class PosLexiconEntry:
    headword: str
    pos_codes: str


class PosLexicon:
    def __init__(self) -> None:
        self.entries: dict[str, PosLexiconEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def codes(self, word: str) -> str | None:
        entry = self.entries.get(word.upper())
        return entry.pos_codes if entry else None


def load_mpos(stream: IO[str]) -> list[PosLexiconEntry]:
    """Parse MPOS records ("word×CODES"). Returns raw, pre-dedup entries."""
    entries = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "×" not in line:
            raise LexiconError(f"MPOS line {lineno}: missing × delimiter")
        word, _, codes = line.rpartition("×")
        if not word or not codes:
            raise LexiconError(f"MPOS line {lineno}: malformed record {line!r}")
        entries.append(PosLexiconEntry(word, codes))
    return entries


def dedup_case_variants(raw: list[PosLexiconEntry]) -> tuple[PosLexicon, int]:
    """Collapse case-colliding MPOS entries into one case-insensitive entry.

    Identical code sets keep one entry; a subset is dropped in favor of its
    superset; otherwise the non-overlapping codes are appended to the
    retained (lowercase-preferred) entry. Returns the lexicon and the number
    of redundant entries fixed.
    """
    lex = PosLexicon()
    fixed = 0
    retained_word: dict[str, str] = {}
    for entry in raw:
        key = entry.headword.upper()
        existing = lex.entries.get(key)
        if existing is None:
            lex.entries[key] = PosLexiconEntry(entry.headword, entry.pos_codes)
            retained_word[key] = entry.headword
            continue
        fixed += 1
        old, new = set(existing.pos_codes), set(entry.pos_codes)
        if new <= old:
            merged = existing.pos_codes
        elif old <= new:
            merged = entry.pos_codes
        else:
            merged = existing.pos_codes + "".join(
                c for c in entry.pos_codes if c not in old
            )
        # Prefer the lowercase spelling for the surviving record.
        headword = existing.headword
        if entry.headword.islower() and not existing.headword.islower():
            headword = entry.headword
        lex.entries[key] = PosLexiconEntry(headword, merged)
    return lex, fixed
