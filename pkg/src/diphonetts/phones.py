"""Phone inventory: Arpabet-derived symbols, categories, and diphthong handling.

The engine's inventory is the CMUdict Arpabet set with the five diphthongs
replaced by monophthong pairs (three of them synthetic: IPAA, IPAE, IPAO),
plus X for silence. Every phone belongs to exactly one of four categories:

* sonorant  - voiced, non-turbulent, sustainable (vowels, semivowels,
              liquids, nasals)
* obstruent - sustainable turbulent phones (fricatives and HH)
* stop      - non-sustainable phones released from occlusion (stops and
              affricates)
* silence   - the X marker
"""

from __future__ import annotations

import enum
from functools import lru_cache


class Category(enum.Enum):
    SONORANT = "sonorant"
    OBSTRUENT = "obstruent"
    STOP = "stop"
    SILENCE = "silence"


SILENCE = "X"

# Raw CMUdict diphthongs; they never appear in the engine inventory.
DIPHTHONGS = ("AW", "AY", "EY", "OW", "OY")

# Replacement pairs. Any stress digit carried by the diphthong stays on the
# first vowel; the second vowel is unstressed.
DIPHTHONG_SPLITS = {
    "EY": ("IPAE", "IH"),
    "AY": ("IPAA", "IH"),
    "OW": ("IPAO", "UH"),
    "AW": ("IPAA", "UH"),
    "OY": ("AO", "IH"),
}

# Stress-bearing vowels of the engine inventory.
VOWELS = frozenset(
    [
        "AA", "AE", "AH", "AO", "EH", "ER", "IH", "IY", "UH", "UW",
        "IPAA", "IPAE", "IPAO",
    ]
)

# Vowels as they appear in raw CMUdict text (pre-decomposition).
RAW_VOWELS = VOWELS.union(DIPHTHONGS) - {"IPAA", "IPAE", "IPAO"}

STOPS = frozenset(["P", "B", "T", "D", "K", "G", "CH", "JH"])
OBSTRUENTS = frozenset(["F", "V", "TH", "DH", "S", "Z", "SH", "ZH", "HH"])
SONORANT_CONSONANTS = frozenset(["L", "M", "N", "NG", "R", "W", "Y"])
SONORANTS = VOWELS | SONORANT_CONSONANTS

NASALS = frozenset(["M", "N", "NG"])

#: All engine phones (37 speakable phones plus silence).
PHONES = SONORANTS | OBSTRUENTS | STOPS | {SILENCE}

#: Phones a speaker records in the monophone pass.
MONOPHONES = tuple(sorted(PHONES - {SILENCE}))

#: Phones that can be sustained (everything that is not a stop or silence).
PERSISTENT = SONORANTS | OBSTRUENTS

# Successor restrictions for the synthetic monophthongs: they only ever
# precede the off-glide vowel(s) they were split with.
SYNTHETIC_SUCCESSORS = {
    "IPAE": frozenset(["IH"]),
    "IPAA": frozenset(["IH", "UH"]),
    "IPAO": frozenset(["UH"]),
}

_RAW_SYMBOLS = frozenset(
    [
        "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER",
        "EY", "F", "G", "HH", "IH", "IY", "JH", "K", "L", "M", "N", "NG",
        "OW", "OY", "P", "R", "S", "SH", "T", "TH", "UH", "UW", "V", "W",
        "Y", "Z", "ZH",
    ]
)


class UnknownPhoneError(ValueError):
    """Raised when a symbol is outside the accepted Arpabet inventory."""


def split_stress(symbol: str) -> tuple[str, str]:
    """Split a possibly stress-digited symbol into (base, digit-or-empty)."""
    if symbol and symbol[-1] in "012":
        return symbol[:-1], symbol[-1]
    return symbol, ""


def strip_stress(symbol: str) -> str:
    return split_stress(symbol)[0]


def is_vowel(symbol: str) -> bool:
    return strip_stress(symbol) in VOWELS


def category(phone: str) -> Category:
    """Category of an engine-inventory phone (stress digits tolerated)."""
    base = strip_stress(phone)
    if base == SILENCE:
        return Category.SILENCE
    if base in STOPS:
        return Category.STOP
    if base in OBSTRUENTS:
        return Category.OBSTRUENT
    if base in SONORANTS:
        return Category.SONORANT
    raise UnknownPhoneError(f"unknown phone: {phone!r}")


def decompose_diphthongs(seq: list[str]) -> list[str]:
    """Replace raw Arpabet diphthongs with their monophthong pairs.

    Stress digits are allowed and carried onto the first replacement vowel;
    the off-glide is emitted unstressed. Idempotent.
    """
    out: list[str] = []
    for symbol in seq:
        base, stress = split_stress(symbol)
        if base in DIPHTHONG_SPLITS:
            first, second = DIPHTHONG_SPLITS[base]
            out.append(first + stress)
            out.append(second)
        elif base in _RAW_SYMBOLS or base in PHONES:
            out.append(symbol)
        else:
            raise UnknownPhoneError(f"unknown Arpabet symbol: {symbol!r}")
    return out


@lru_cache(maxsize=1)
def capture_diphone_set() -> frozenset[tuple[str, str]]:
    """Diphones a speaker must record in the diphone pass.

    All ordered pairs of distinct speakable phones, excluding

    * pairs terminating in a stop (the burst recording covers those),
    * transitions among the nasals M, N, NG (indistinguishable in
      persistence), and
    * pairs leaving a synthetic monophthong except to its permitted
      off-glide vowels.
    """
    pairs = set()
    for p1 in MONOPHONES:
        for p2 in MONOPHONES:
            if p1 == p2:
                continue
            if p2 in STOPS:
                continue
            if p1 in NASALS and p2 in NASALS:
                continue
            if p1 in SYNTHETIC_SUCCESSORS and p2 not in SYNTHETIC_SUCCESSORS[p1]:
                continue
            pairs.add((p1, p2))
    return frozenset(pairs)


@lru_cache(maxsize=1)
def silence_diphone_set() -> frozenset[tuple[str, str]]:
    """Silence-entry and silence-exit pairs, taken from monophone sectioning."""
    pairs = set()
    for p in sorted(PERSISTENT):
        pairs.add((SILENCE, p))
        pairs.add((p, SILENCE))
    return frozenset(pairs)


def required_diphone_set() -> frozenset[tuple[str, str]]:
    """Every diphone the bank needs: captured pairs plus silence pairs."""
    return capture_diphone_set() | silence_diphone_set()


def inventory_report() -> str:
    """Reference text table of the inventory, embedded in bank manifests."""
    lines = ["# phone\tcategory"]
    for p in sorted(PHONES):
        lines.append(f"{p}\t{category(p).value}")
    lines.append(f"# monophones: {len(MONOPHONES)}")
    lines.append(f"# capture diphones: {len(capture_diphone_set())}")
    lines.append(f"# silence diphones: {len(silence_diphone_set())}")
    return "\n".join(lines) + "\n"
