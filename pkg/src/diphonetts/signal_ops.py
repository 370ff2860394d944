"""Time-domain waveform modification.

Voiced material is pitch/duration shifted by re-spacing windowed glottal
excitations (each isolated with an asymmetric raised-cosine window whose
sides reach the neighboring excitations, so the windows sum to one and the
identity shift reconstructs the input). Unvoiced material is duration
shifted by repeating or omitting 10 ms frames driven by a fractional
accumulator; its frequency content never moves. Mixed diphones are split at
the end of voicing and each side is handled by its own method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .audio_io import SAMPLE_RATE
from .phones import Category, category

USDS_FRAME_S = 0.01
USDS_CROSSFADE_S = 0.001
CONCAT_WINDOW_S = 0.02
DEFAULT_SMOOTHING_MS = 2.0
MIN_PEAK_FRACTION = 0.2


class PulseDetectionError(ValueError):
    pass


@dataclass
class ShiftSpec:
    """Per-diphone targets; start/end values interpolate linearly."""

    volume: tuple[float, float] = (1.0, 1.0)
    pitch: tuple[float, float] = (1.0, 1.0)
    duration: tuple[float, float] = (1.0, 1.0)

    def interp(self, field: str, frac: float) -> float:
        a, b = getattr(self, field)
        return a + (b - a) * frac

    def slice(self, lo: float, hi: float) -> "ShiftSpec":
        return ShiftSpec(
            (self.interp("volume", lo), self.interp("volume", hi)),
            (self.interp("pitch", lo), self.interp("pitch", hi)),
            (self.interp("duration", lo), self.interp("duration", hi)),
        )

    def reversed(self) -> "ShiftSpec":
        return ShiftSpec(
            self.volume[::-1], self.pitch[::-1], self.duration[::-1]
        )

    def is_identity(self) -> bool:
        return all(
            getattr(self, f) == (1.0, 1.0)
            for f in ("volume", "pitch", "duration")
        )


def moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average (window clamped to the signal length)."""
    window = max(1, min(window, len(x)))
    csum = np.cumsum(np.concatenate(([0.0], x)))
    half = window // 2
    lo = np.clip(np.arange(len(x)) - half, 0, len(x))
    hi = np.clip(np.arange(len(x)) + (window - half), 0, len(x))
    return (csum[hi] - csum[lo]) / np.maximum(hi - lo, 1)


def detect_pulses(wav: np.ndarray, smoothing_ms: float = DEFAULT_SMOOTHING_MS,
                  rate: int = SAMPLE_RATE) -> np.ndarray:
    """Glottal excitation sample indices of a voiced clip.

    The waveform is smoothed to merge each excitation into one hump,
    clipped below zero, and peak-picked; peaks under 20% of the tallest are
    noise and trailing peaks more than twice the median gap from their
    predecessor belong to unvoiced material, so both are dropped.
    """
    if len(wav) < 3:
        raise PulseDetectionError("clip too short for pulse detection")
    window = max(1, int(round(smoothing_ms / 1000.0 * rate)))
    smooth = moving_average(np.asarray(wav, dtype=np.float64), window)
    smooth = np.maximum(smooth, 0.0)
    inner = smooth[1:-1]
    peaks = np.nonzero((inner > smooth[:-2]) & (inner >= smooth[2:]) & (inner > 0))[0] + 1
    if len(peaks) == 0:
        raise PulseDetectionError("no pulses found (unvoiced or too smooth)")
    heights = smooth[peaks]
    peaks = peaks[heights >= MIN_PEAK_FRACTION * heights.max()]
    if len(peaks) >= 3:
        median_gap = float(np.median(np.diff(peaks)))
        while len(peaks) >= 2 and peaks[-1] - peaks[-2] > 2 * median_gap:
            peaks = peaks[:-1]
    return peaks.astype(np.int64)


def pulse_windows(peaks: np.ndarray, length: int):
    """(lo, hi, weights) per pulse; the windows sum to one over the clip."""
    n = len(peaks)
    for k in range(n):
        lo = 0 if k == 0 else int(peaks[k - 1]) + 1
        hi = length - 1 if k == n - 1 else int(peaks[k + 1]) - 1
        s = np.arange(lo, hi + 1)
        w = np.ones(len(s))
        if k > 0:
            left = s < peaks[k]
            span = peaks[k] - peaks[k - 1]
            w[left] = 0.5 - 0.5 * np.cos(np.pi * (s[left] - peaks[k - 1]) / span)
        if k < n - 1:
            right = s > peaks[k]
            span = peaks[k + 1] - peaks[k]
            w[right] = 0.5 + 0.5 * np.cos(np.pi * (s[right] - peaks[k]) / span)
        yield lo, hi, w


def apply_volume_ramp(wav: np.ndarray, v0: float, v1: float) -> tuple[np.ndarray, int]:
    """Linear volume ramp; samples beyond full scale hard-clip (counted)."""
    if len(wav) == 0:
        return wav, 0
    ramp = np.linspace(v0, v1, len(wav))
    out = wav * ramp
    clipped = int(np.count_nonzero(np.abs(out) > 1.0))
    if clipped:
        out = np.clip(out, -1.0, 1.0)
    return out, clipped


def psola(wav: np.ndarray, peaks: np.ndarray, spec: ShiftSpec,
          rate: int = SAMPLE_RATE) -> tuple[np.ndarray, int]:
    """Pitch/duration shift a voiced clip around its glottal excitations.

    Gap lengths scaled by the duration multiplier (evaluated at each gap's
    center) define the excitation ranges; excitations are then placed
    sequentially, each step being the local original gap over the pitch
    multiplier, keeping the first excitation where it was. Each placement
    overlap-adds the windowed pulse owning the range the position fell in.
    Returns (waveform, clipped sample count).
    """
    wav = np.asarray(wav, dtype=np.float64)
    L = len(wav)
    n = len(peaks)
    if n < 2:
        raise PulseDetectionError("psola needs at least two excitations")
    p = np.asarray(peaks, dtype=np.float64)
    gaps = np.diff(p)
    centers = (p[:-1] + p[1:]) / 2.0
    frac = centers / max(L - 1, 1)
    dur = spec.duration[0] + (spec.duration[1] - spec.duration[0]) * frac
    pitch = spec.pitch[0] + (spec.pitch[1] - spec.pitch[0]) * frac
    bounds = np.empty(n)
    bounds[0] = p[0]
    bounds[1:] = p[0] + np.cumsum(gaps * dur)
    steps = gaps / pitch
    placements, indices = kernels.psola_place(float(p[0]), bounds, steps)
    tail = (L - 1) - int(peaks[-1])
    out_len = int(round(float(placements.max()))) + tail + 1
    out = np.zeros(out_len)
    kernels.overlap_add(out, wav, np.asarray(peaks, dtype=np.int64),
                        placements, indices)
    return apply_volume_ramp(out, *spec.volume)


def usds(wav: np.ndarray, spec: ShiftSpec,
         rate: int = SAMPLE_RATE) -> tuple[np.ndarray, int]:
    """Duration shift by frame repetition/omission; pitch is never moved.

    Frames are 10 ms; an accumulator gains (dur - 1) each frame, emitting a
    repeat when it reaches +1 and a skip when it reaches -1. Discontinuous
    junctions get a 1 ms crossfade against the source's natural
    continuation. Returns (waveform, clipped sample count).
    """
    wav = np.asarray(wav, dtype=np.float64)
    L = len(wav)
    if L == 0:
        return wav.copy(), 0
    frame = max(1, int(round(USDS_FRAME_S * rate)))
    xfade = max(1, int(round(USDS_CROSSFADE_S * rate)))
    n_frames = (L + frame - 1) // frame
    frac = (np.arange(n_frames) + 0.5) / n_frames
    durs = spec.duration[0] + (spec.duration[1] - spec.duration[0]) * frac
    plan = kernels.usds_plan(durs)
    if len(plan) == 0:
        return np.zeros(0), 0
    pieces: list[np.ndarray] = []
    prev = None
    for idx in plan:
        start = int(idx) * frame
        data = wav[start:start + frame]
        if prev is not None and idx != prev + 1:
            cont_start = (prev + 1) * frame
            cont = wav[cont_start:cont_start + xfade]
            k = min(len(cont), len(data), xfade)
            if k > 0:
                data = data.copy()
                t = np.arange(k) / k
                data[:k] = cont[:k] * (1.0 - t) + data[:k] * t
        pieces.append(data)
        prev = int(idx)
    out = np.concatenate(pieces)
    return apply_volume_ramp(out, *spec.volume)


def _endpoint_voicing(p: str) -> str:
    cat = category(p)
    if cat is Category.SONORANT:
        return "voiced"
    if cat is Category.OBSTRUENT:
        return "unvoiced"
    return "neutral"  # stops and silence adopt the other endpoint's class


def split_point(wav: np.ndarray, peaks: np.ndarray) -> int:
    """Voiced/unvoiced boundary: one final gap length past the last pulse."""
    if len(peaks) >= 2:
        last_gap = int(peaks[-1]) - int(peaks[-2])
    else:
        last_gap = 0
    return min(len(wav), int(peaks[-1]) + last_gap)


def shift_diphone(clip: np.ndarray, p1: str, p2: str, spec: ShiftSpec,
                  smoothing_ms: float = DEFAULT_SMOOTHING_MS,
                  rate: int = SAMPLE_RATE) -> tuple[np.ndarray, list[str]]:
    """Route a diphone clip to PSOLA, USDS, or the split combination."""
    warnings: list[str] = []
    v1, v2 = _endpoint_voicing(p1), _endpoint_voicing(p2)
    if v1 == "neutral" and v2 == "neutral":
        kinds = ("unvoiced", "unvoiced")
    elif v1 == "neutral":
        kinds = (v2, v2)
    elif v2 == "neutral":
        kinds = (v1, v1)
    else:
        kinds = (v1, v2)

    def run_psola(wav: np.ndarray, sub: ShiftSpec) -> np.ndarray:
        try:
            peaks = detect_pulses(wav, smoothing_ms, rate)
            if len(peaks) < 2:
                raise PulseDetectionError("fewer than two pulses")
            out, _ = psola(wav, peaks, sub, rate)
            return out
        except PulseDetectionError as exc:
            warnings.append(f"{p1}-{p2}: pulse detection failed ({exc}); "
                            "falling back to duration shifting")
            out, _ = usds(wav, sub, rate)
            return out

    if kinds == ("voiced", "voiced"):
        return run_psola(clip, spec), warnings
    if kinds == ("unvoiced", "unvoiced"):
        out, _ = usds(clip, spec, rate)
        return out, warnings
    if kinds == ("unvoiced", "voiced"):
        flipped, warnings2 = shift_diphone(
            clip[::-1], p2, p1, spec.reversed(), smoothing_ms, rate
        )
        warnings.extend(warnings2)
        return flipped[::-1], warnings
    # voiced -> unvoiced
    try:
        peaks = detect_pulses(clip, smoothing_ms, rate)
    except PulseDetectionError as exc:
        warnings.append(f"{p1}-{p2}: pulse detection failed ({exc}); "
                        "falling back to duration shifting")
        out, _ = usds(clip, spec, rate)
        return out, warnings
    cut = split_point(clip, peaks)
    frac = cut / max(len(clip) - 1, 1)
    head = clip[:cut]
    tail = clip[cut:]
    head_out = run_psola(head, spec.slice(0.0, frac))
    tail_out, _ = usds(tail, spec.slice(frac, 1.0), rate)
    return np.concatenate([head_out, tail_out]), warnings


def concat_overlap(w1: np.ndarray, w2: np.ndarray, connective: str,
                   rate: int = SAMPLE_RATE) -> tuple[int, list[str]]:
    """Overlap length (in samples) for joining w1 and w2 on `connective`.

    Zero across silence or a stop (both ends are already zero, a plain
    append suffices). Otherwise the waves are aligned so the maxima of w1's
    last 20 ms and w2's first 20 ms coincide, matching phase for anything
    voiced; overlaps that exceed either waveform shrink with a warning.
    """
    warnings: list[str] = []
    if len(w1) == 0 or len(w2) == 0:
        return 0, warnings
    if category(connective) in (Category.SILENCE, Category.STOP):
        return 0, warnings
    window = max(1, int(round(CONCAT_WINDOW_S * rate)))
    tail = w1[-min(window, len(w1)):]
    m1 = len(w1) - len(tail) + int(np.argmax(tail))
    head = w2[:min(window, len(w2))]
    m2 = int(np.argmax(head))
    overlap = (len(w1) - m1) + m2
    max_overlap = min(len(w1), len(w2))
    if overlap > max_overlap or overlap < 1:
        warnings.append(f"{connective}: alignment overlap {overlap} clamped")
        overlap = max(1, min(max_overlap, overlap))
    return overlap, warnings


def smooth_concat(w1: np.ndarray, w2: np.ndarray, connective: str,
                  rate: int = SAMPLE_RATE) -> tuple[np.ndarray, list[str]]:
    """Join two waveforms sharing a connective phone.

    Across silence or a stop both ends are already zero, so the clips are
    simply appended. Otherwise the waves are overlapped with their aligned
    maxima coinciding and crossfaded (w1 ramps out, w2 ramps in).
    """
    w1 = np.asarray(w1, dtype=np.float64)
    w2 = np.asarray(w2, dtype=np.float64)
    overlap, warnings = concat_overlap(w1, w2, connective, rate)
    if overlap == 0:
        return np.concatenate([w1, w2]), warnings
    offset = len(w1) - overlap
    out = np.zeros(max(len(w1), offset + len(w2)))
    out[:len(w1)] = w1
    fade = np.linspace(1.0, 0.0, overlap)
    out[offset:offset + overlap] *= fade
    faded_in = w2.copy()
    faded_in[:overlap] *= 1.0 - fade
    out[offset:offset + len(w2)] += faded_in
    return out, warnings
