"""Prosody planning: per-phone volume, pitch, and duration multipliers.

Word-level contributions come from sentence-position curves (selected by
the sentence terminator), lexical-class targets, and word frequency;
phone-level contributions come from vowel stress. Volume and duration
compose multiplicatively; pitch composes additively on a twelve-tone step
scale before conversion to a frequency ratio (±12 steps per octave), so the
contributions commute.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import IO

from . import phones
from .textnorm import Token, TokenKind

VARIABLES = ("volume", "pitch", "duration")
TERMINATORS = ("period", "question", "exclamation")


def steps_to_ratio(steps: float) -> float:
    """Frequency ratio of a twelve-tone equal-temperament step count."""
    return 2.0 ** (steps / 12.0)


class CurveError(ValueError):
    pass


@dataclass
class Curve:
    """Interpolated control-point curve; outside the points it clamps."""

    points: list[tuple[float, float]]
    kind: str = "linear"  # linear | sinusoidal | quintic

    def __post_init__(self) -> None:
        if not self.points:
            raise CurveError("curve needs at least one point")
        self.points = sorted((float(x), float(y)) for x, y in self.points)
        if self.kind not in ("linear", "sinusoidal", "quintic"):
            raise CurveError(f"unknown interpolation kind {self.kind!r}")

    def __call__(self, x: float) -> float:
        pts = self.points
        if len(pts) == 1 or x <= pts[0][0]:
            return pts[0][1] if x <= pts[0][0] else pts[-1][1]
        if x >= pts[-1][0]:
            return pts[-1][1]
        i = next(k for k in range(len(pts) - 1) if pts[k][0] <= x <= pts[k + 1][0])
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        t = (x - x0) / (x1 - x0)
        if self.kind == "linear":
            return y0 + (y1 - y0) * t
        if self.kind == "sinusoidal":
            # Half-cosine easing between the two points.
            return y0 + (y1 - y0) * (0.5 - 0.5 * math.cos(math.pi * t))
        return self._quintic(i, t)

    def _derivatives(self) -> list[tuple[float, float]]:
        """(y', y'') estimates per knot; natural (zero-curvature) ends."""
        pts = self.points
        n = len(pts)
        d1 = [0.0] * n
        d2 = [0.0] * n
        for i in range(n):
            if 0 < i < n - 1:
                x0, y0 = pts[i - 1]
                x1, y1 = pts[i]
                x2, y2 = pts[i + 1]
                d1[i] = (y2 - y0) / (x2 - x0)
                h0, h1 = x1 - x0, x2 - x1
                d2[i] = 2.0 * ((y2 - y1) / h1 - (y1 - y0) / h0) / (h0 + h1)
            elif i == 0:
                d1[i] = (pts[1][1] - pts[0][1]) / (pts[1][0] - pts[0][0])
            else:
                d1[i] = (pts[i][1] - pts[i - 1][1]) / (pts[i][0] - pts[i - 1][0])
        return list(zip(d1, d2))

    def _quintic(self, i: int, t: float) -> float:
        """Quintic Hermite segment matching value, slope, and curvature at
        both knots (C2 across segments)."""
        (x0, y0), (x1, y1) = self.points[i], self.points[i + 1]
        h = x1 - x0
        derivs = self._derivatives()
        m0, c0 = derivs[i]
        m1, c1 = derivs[i + 1]
        v0, v1 = m0 * h, m1 * h
        a0, a1 = c0 * h * h, c1 * h * h
        t2, t3, t4, t5 = t * t, t ** 3, t ** 4, t ** 5
        h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5
        h10 = t - 6 * t3 + 8 * t4 - 3 * t5
        h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5
        h01 = 10 * t3 - 15 * t4 + 6 * t5
        h11 = -4 * t3 + 7 * t4 - 3 * t5
        h21 = 0.5 * t3 - t4 + 0.5 * t5
        return (y0 * h00 + v0 * h10 + a0 * h20 +
                y1 * h01 + v1 * h11 + a1 * h21)

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "kind": self.kind}

    @classmethod
    def from_dict(cls, d: dict) -> "Curve":
        return cls([tuple(p) for p in d["points"]], d.get("kind", "linear"))


def neutral_curve(variable: str) -> Curve:
    return Curve([(0.0, 0.0 if variable == "pitch" else 1.0)])


@dataclass
class ClassTarget:
    volume: float = 1.0
    pitch_steps: float = 0.0
    duration: float = 1.0
    jitter: float = 0.0
    mode: str = "absolute"  # absolute | relative-delta | approach-percentage
    approach_pct: float = 0.5


@dataclass
class StressTarget:
    volume: float = 1.0
    pitch_steps: float = 0.0
    duration: float = 1.0


DEFAULT_PAUSES = {
    ",": 0.25,
    ";": 0.35,
    ":": 0.35,
    ".": 0.6,
    "?": 0.6,
    "!": 0.6,
    "...": 0.8,
}


@dataclass
class ProsodySettings:
    stress: dict[int, StressTarget] = field(
        default_factory=lambda: {0: StressTarget(), 1: StressTarget(), 2: StressTarget()}
    )
    classes: dict[str, ClassTarget] = field(default_factory=dict)
    curves: dict[str, dict[str, Curve]] = field(
        default_factory=lambda: {
            t: {v: neutral_curve(v) for v in VARIABLES} for t in TERMINATORS
        }
    )
    frequency_curves: dict[str, Curve] = field(
        default_factory=lambda: {v: neutral_curve(v) for v in VARIABLES}
    )
    pauses: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_PAUSES))
    clamps: dict[str, tuple[float, float]] = field(
        default_factory=lambda: {
            "volume": (0.0, 4.0),
            "pitch": (0.25, 4.0),
            "duration": (0.1, 10.0),
        }
    )
    seed: int = 0
    bracket_banks: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "stress": {
                str(k): {"volume": t.volume, "pitch_steps": t.pitch_steps,
                         "duration": t.duration}
                for k, t in sorted(self.stress.items())
            },
            "classes": {
                tag: {
                    "volume": t.volume, "pitch_steps": t.pitch_steps,
                    "duration": t.duration, "jitter": t.jitter,
                    "mode": t.mode, "approach_pct": t.approach_pct,
                }
                for tag, t in sorted(self.classes.items())
            },
            "curves": {
                term: {v: c.to_dict() for v, c in vars_.items()}
                for term, vars_ in self.curves.items()
            },
            "frequency_curves": {
                v: c.to_dict() for v, c in self.frequency_curves.items()
            },
            "pauses": dict(self.pauses),
            "clamps": {k: list(v) for k, v in self.clamps.items()},
            "seed": self.seed,
            "bracket_banks": dict(self.bracket_banks),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProsodySettings":
        s = cls()
        for k, t in d.get("stress", {}).items():
            s.stress[int(k)] = StressTarget(
                t.get("volume", 1.0), t.get("pitch_steps", 0.0), t.get("duration", 1.0)
            )
        for tag, t in d.get("classes", {}).items():
            s.classes[tag] = ClassTarget(
                t.get("volume", 1.0), t.get("pitch_steps", 0.0),
                t.get("duration", 1.0), t.get("jitter", 0.0),
                t.get("mode", "absolute"), t.get("approach_pct", 0.5),
            )
        if "curves" in d:
            s.curves = {
                term: {v: Curve.from_dict(c) for v, c in vars_.items()}
                for term, vars_ in d["curves"].items()
            }
        if "frequency_curves" in d:
            s.frequency_curves = {
                v: Curve.from_dict(c) for v, c in d["frequency_curves"].items()
            }
        if "pauses" in d:
            s.pauses = {k: float(v) for k, v in d["pauses"].items()}
        if "clamps" in d:
            s.clamps = {k: (float(v[0]), float(v[1])) for k, v in d["clamps"].items()}
        s.seed = int(d.get("seed", 0))
        s.bracket_banks = dict(d.get("bracket_banks", {}))
        return s

    def save(self, stream: IO[str]) -> None:
        json.dump(self.to_dict(), stream, indent=2, sort_keys=True)
        stream.write("\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "ProsodySettings":
        return cls.from_dict(json.load(stream))


def load_frequency_table(stream: IO[str]) -> tuple[dict[str, float], int]:
    """BNC-style frequency list (count, word) to word -> log10(count).

    Words occurring 10 or fewer times are ignored. Returns (table, number
    of malformed rows skipped).
    """
    table: dict[str, float] = {}
    skipped = 0
    for raw in stream:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            skipped += 1
            continue
        try:
            count = int(parts[0].replace(",", ""))
        except ValueError:
            skipped += 1
            continue
        if count <= 10:
            continue
        table[parts[1].upper()] = math.log10(count)
    return table, skipped


@dataclass
class PhonePlan:
    phone: str
    volume: float
    pitch: float  # frequency ratio
    duration: float


@dataclass
class ProsodyPlan:
    """Multipliers per output phone plus pause lengths per punct token."""

    phone_plans: list[list[PhonePlan]]  # one list per token
    pauses: dict[int, float]  # token index -> seconds
    word_values: list[dict[str, float]]  # per token: composed word factors

    def flat(self) -> list[PhonePlan]:
        return [p for plans in self.phone_plans for p in plans]


def _stress_of(symbol: str) -> int | None:
    base, digit = phones.split_stress(symbol)
    if base in phones.VOWELS:
        return int(digit) if digit else 0
    return None


def plan(tokens: list[Token], tags: list[str | None],
         pronunciations: list[list[str]], settings: ProsodySettings,
         frequency_table: dict[str, float] | None = None,
         rng: random.Random | None = None) -> ProsodyPlan:
    """Compose the prosody plan for one tokenized, tagged, pronounced input.

    `tags` and `pronunciations` align with `tokens` (None/empty for
    punctuation). Sentence curves are evaluated at each word's fractional
    position; class targets apply per their mode with uniform jitter; the
    frequency curves are evaluated at the word's clamped log10 count (1 for
    unknown words); stress targets apply per vowel phone.
    """
    rng = rng or random.Random(settings.seed)
    freq = frequency_table or {}

    # Sentence bounds: count words per sentence for curve positions.
    words_per_sentence: dict[int, int] = {}
    for tok in tokens:
        if tok.kind is not TokenKind.PUNCT:
            words_per_sentence[tok.sentence_index] = max(
                words_per_sentence.get(tok.sentence_index, 0), tok.word_index + 1
            )
    terminators: dict[int, str] = {}
    for tok in tokens:
        if tok.kind is TokenKind.PUNCT:
            s = tok.sentence_index
            if "?" in tok.text:
                terminators.setdefault(s, "question")
            elif "!" in tok.text:
                terminators.setdefault(s, "exclamation")
            elif "." in tok.text:
                terminators.setdefault(s, "period")

    phone_plans: list[list[PhonePlan]] = []
    pauses: dict[int, float] = {}
    word_values: list[dict[str, float]] = []
    prev_class = {"volume": 1.0, "pitch": 0.0, "duration": 1.0}

    for index, tok in enumerate(tokens):
        if tok.kind is TokenKind.PUNCT:
            phone_plans.append([])
            word_values.append({})
            pause = 0.0
            if "..." in tok.text:
                pause = settings.pauses.get("...", 0.0)
            else:
                for c in tok.text:
                    pause = max(pause, settings.pauses.get(c, 0.0))
            if pause > 0:
                pauses[index] = pause
            continue

        n = words_per_sentence.get(tok.sentence_index, 1)
        x = tok.word_index / (n - 1) if n > 1 else 0.0
        term = terminators.get(tok.sentence_index, "period")
        curve_set = settings.curves.get(term) or settings.curves["period"]

        vol = curve_set["volume"](x)
        steps = curve_set["pitch"](x)
        dur = curve_set["duration"](x)

        tag = tags[index]
        target = settings.classes.get(tag) if tag else None
        if target is not None:
            contrib = {
                "volume": target.volume,
                "pitch": target.pitch_steps,
                "duration": target.duration,
            }
            for var in contrib:
                neutral = 0.0 if var == "pitch" else 1.0
                if target.mode == "relative-delta":
                    value = prev_class[var] + (contrib[var] - neutral)
                elif target.mode == "approach-percentage":
                    value = prev_class[var] + (
                        contrib[var] - prev_class[var]
                    ) * target.approach_pct
                else:
                    value = contrib[var]
                if target.jitter:
                    value += rng.uniform(-target.jitter, target.jitter)
                contrib[var] = value
            prev_class = dict(contrib)
            vol *= contrib["volume"]
            steps += contrib["pitch"]
            dur *= contrib["duration"]

        logf = freq.get(tok.text.upper(), 1.0)
        logf = min(max(logf, 1.0), 7.0)
        vol *= settings.frequency_curves["volume"](logf)
        steps += settings.frequency_curves["pitch"](logf)
        dur *= settings.frequency_curves["duration"](logf)

        word_values.append({"volume": vol, "pitch_steps": steps, "duration": dur})

        plans: list[PhonePlan] = []
        for symbol in pronunciations[index]:
            stress = _stress_of(symbol)
            pv, ps, pd = vol, steps, dur
            if stress is not None:
                st = settings.stress.get(stress, StressTarget())
                pv *= st.volume
                ps += st.pitch_steps
                pd *= st.duration
            lo, hi = settings.clamps["volume"]
            pv = min(max(pv, lo), hi)
            lo, hi = settings.clamps["duration"]
            pd = min(max(pd, lo), hi)
            ratio = steps_to_ratio(ps)
            lo, hi = settings.clamps["pitch"]
            ratio = min(max(ratio, lo), hi)
            plans.append(PhonePlan(phones.strip_stress(symbol), pv, ratio, pd))
        phone_plans.append(plans)

    return ProsodyPlan(phone_plans, pauses, word_values)
