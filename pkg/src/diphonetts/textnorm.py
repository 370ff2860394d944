"""Text preprocessing: tokenization, number verbalization, mixed tokens.

Input strings are split on whitespace; non-alphanumeric runs at token edges
become punctuation tokens of their own, while interior punctuation is kept
("I'm", "127.0.0.1"). Numbers are read out in words, falling back to
digit-by-digit reading (with "." as "point") when a token is not a single
real number.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

SENTENCE_TERMINATORS = ".?!"


class TokenKind(enum.Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCT = "punct"
    MIXED = "mixed"


@dataclass
class Token:
    text: str
    kind: TokenKind
    sentence_index: int = 0
    word_index: int = 0


def _classify(core: str) -> TokenKind:
    if all(c.isdigit() or c in ".," for c in core) and any(c.isdigit() for c in core):
        return TokenKind.NUMBER
    if any(c.isalpha() for c in core) and not any(c.isdigit() for c in core) and all(
        c.isalpha() or c == "'" for c in core
    ):
        return TokenKind.WORD
    return TokenKind.MIXED


def tokenize(text: str) -> list[Token]:
    """Split into word/number/punct/mixed tokens with sentence ordinals."""
    tokens: list[Token] = []
    sentence = 0
    word_in_sentence = 0
    for chunk in text.split():
        head = 0
        while head < len(chunk) and not chunk[head].isalnum():
            head += 1
        tail = len(chunk)
        while tail > head and not chunk[tail - 1].isalnum():
            tail -= 1
        parts: list[tuple[str, TokenKind]] = []
        if head:
            parts.append((chunk[:head], TokenKind.PUNCT))
        if tail > head:
            core = chunk[head:tail]
            parts.append((core, _classify(core)))
        if tail < len(chunk):
            parts.append((chunk[tail:], TokenKind.PUNCT))
        for text_part, kind in parts:
            tokens.append(Token(text_part, kind, sentence, word_in_sentence))
            if kind is TokenKind.PUNCT:
                if any(c in SENTENCE_TERMINATORS for c in text_part):
                    sentence += 1
                    word_in_sentence = 0
            else:
                word_in_sentence += 1
    return tokens


def sentences(tokens: list[Token]) -> list[list[Token]]:
    """Group tokens by sentence index (punctuation stays with its sentence)."""
    out: list[list[Token]] = []
    for tok in tokens:
        while len(out) <= tok.sentence_index:
            out.append([])
        out[tok.sentence_index].append(tok)
    return [s for s in out if s]


_UNITS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
_TENS = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
]
_SCALES = [
    (10 ** 15, "quadrillion"),
    (10 ** 12, "trillion"),
    (10 ** 9, "billion"),
    (10 ** 6, "million"),
    (10 ** 3, "thousand"),
]


def _under_hundred(n: int) -> str:
    if n < 20:
        return _UNITS[n]
    tens, units = divmod(n, 10)
    return _TENS[tens] + ("-" + _UNITS[units] if units else "")


def _under_thousand(n: int, use_and: bool) -> list[str]:
    words: list[str] = []
    hundreds, rest = divmod(n, 100)
    if hundreds:
        words += [_UNITS[hundreds], "hundred"]
        if rest:
            words.append("and")
    elif use_and and rest:
        words.append("and")
    if rest or not words:
        words.append(_under_hundred(rest))
    return words


def integer_to_words(n: int) -> list[str]:
    """British-style verbalization ("one thousand and twenty-four")."""
    if n == 0:
        return ["zero"]
    words: list[str] = []
    for scale, name in _SCALES:
        group, n = divmod(n, scale)
        if group:
            words += _under_thousand(group, use_and=False) + [name]
    if n:
        words += _under_thousand(n, use_and=bool(words))
    return words


def _digits_out(text: str) -> list[str]:
    words: list[str] = []
    for c in text:
        if c.isdigit():
            words.append(_UNITS[int(c)])
        elif c == ".":
            words.append("point")
    return words


def number_to_words(token: str) -> list[str]:
    """Words for a number token.

    Tokens that parse as a single real number (place commas allowed) are
    verbalized; anything else (e.g. "127.0.0.1") is read digit by digit
    with "." pronounced "point".
    """
    core = token.replace(",", "")
    if core.isdigit():
        if len(core) > 18:
            return _digits_out(core)
        return integer_to_words(int(core))
    if core.count(".") == 1:
        whole, frac = core.split(".")
        if (whole.isdigit() or not whole) and (frac.isdigit() or not frac):
            words = integer_to_words(int(whole)) if whole else []
            if frac:
                words = words + ["point"] + _digits_out(frac)
            return words
    return _digits_out(core)


#: Pronounceable symbols inside mixed tokens; other punctuation is dropped.
SYMBOL_WORDS = {
    "&": ["and"],
    "%": ["percent"],
    "+": ["plus"],
    "@": ["at"],
    "=": ["equals"],
    "$": ["dollar"],
    "#": ["hash"],
}


def split_runs(token: str) -> list[tuple[str, str]]:
    """Maximal (kind, text) runs of a mixed token: alpha / digit / other."""
    runs: list[tuple[str, str]] = []
    for c in token:
        kind = "alpha" if c.isalpha() else "digit" if c.isdigit() else "other"
        if runs and runs[-1][0] == kind:
            runs[-1] = (kind, runs[-1][1] + c)
        else:
            runs.append((kind, c))
    return runs


def split_mixed(token: str, pronounce_word) -> list[str]:
    """Pronunciation of a mixed token by chunk concatenation.

    Alphabetic chunks go through `pronounce_word` (lexicon or G2P), numeric
    chunks are verbalized first, known symbols are spoken, and remaining
    punctuation is dropped. No silence is inserted between chunks.
    """
    out: list[str] = []
    for kind, text in split_runs(token):
        if kind == "alpha":
            out.extend(pronounce_word(text))
        elif kind == "digit":
            for word in number_to_words(text):
                for piece in word.split("-"):
                    out.extend(pronounce_word(piece))
        else:
            for c in text:
                for word in SYMBOL_WORDS.get(c, []):
                    out.extend(pronounce_word(word))
    return out


def terminator_kind(tokens: list[Token]) -> str:
    """Sentence terminator class: "question", "exclamation", or "period"."""
    for tok in reversed(tokens):
        if tok.kind is TokenKind.PUNCT:
            if "?" in tok.text:
                return "question"
            if "!" in tok.text:
                return "exclamation"
            if "." in tok.text:
                return "period"
    return "period"
