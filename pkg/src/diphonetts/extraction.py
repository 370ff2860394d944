"""Automatic diphone extraction from prompted recordings.

Monophone recordings are trimmed against calibrated silence thresholds and
split into onset / sustain / offset at the crossings of the whole-utterance
RMS by the short-term RMS. Diphone recordings are segmented on the distance
line: the difference of log-spectral distances from each STFT frame to the
two target phone spectra, which swings from low to high across the
transition.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import phones
from .audio_io import SAMPLE_RATE, read_wav, write_wav

STFT_WINDOW_S = 0.020
STFT_HOP_S = 0.010
RMS_WINDOW_S = 0.020
RMS_HOP_S = 0.010
FADE_S = 0.01
DISTANCE_SMOOTHING_FRAMES = 5
SPECTRAL_FLOOR = 0.1
ONE_LSB = 1.0 / (1 << 23)


class ExtractionError(ValueError):
    pass


class AmbiguousTransitionError(ExtractionError):
    """Raised when the distance line does not show one clean traversal."""


@dataclass
class SilenceProfile:
    amplitude_threshold: float
    rms_threshold: float


@dataclass
class MonophoneRecord:
    phone: str
    onset: np.ndarray | None
    sustain: np.ndarray | None
    offset: np.ndarray | None
    burst: np.ndarray | None = None
    warnings: list[str] = field(default_factory=list)


def calibrate_silence(wav: np.ndarray) -> SilenceProfile:
    """Thresholds from an ambient-silence recording.

    The amplitude threshold is twice the loudest silence sample (so sounds
    slightly louder than silence stay excluded); the RMS of the whole
    recording is kept as a secondary check. Both are floored at one LSB so
    an all-zero calibration cannot classify everything as speech.
    """
    wav = np.asarray(wav, dtype=np.float64)
    if len(wav) == 0:
        raise ExtractionError("empty calibration recording")
    peak = float(np.max(np.abs(wav)))
    if peak >= 1.0:
        raise ExtractionError("clipped calibration recording")
    amplitude = max(2.0 * peak, ONE_LSB)
    rms = max(float(np.sqrt(np.mean(wav ** 2))), ONE_LSB)
    return SilenceProfile(amplitude, rms)


def short_term_rms(wav: np.ndarray, rate: int = SAMPLE_RATE,
                   window_s: float = RMS_WINDOW_S,
                   hop_s: float = RMS_HOP_S) -> tuple[np.ndarray, np.ndarray]:
    """(rms values, window-center sample indices)."""
    window = max(1, int(round(window_s * rate)))
    hop = max(1, int(round(hop_s * rate)))
    if len(wav) < window:
        window = len(wav)
    # Truncated windows at the tail keep the final fade visible.
    starts = np.arange(0, max(len(wav) - window // 2, 1), hop)
    values = np.empty(len(starts))
    centers = np.empty(len(starts), dtype=np.int64)
    for i, s in enumerate(starts):
        chunk = wav[s:s + window]
        values[i] = np.sqrt(np.mean(chunk ** 2))
        centers[i] = s + len(chunk) // 2
    return values, centers


def _speech_span(wav: np.ndarray, profile: SilenceProfile,
                 rate: int) -> tuple[int, int]:
    """First/last sample exceeding both the amplitude and RMS thresholds."""
    rms, centers = short_term_rms(wav, rate)
    hop = centers[1] - centers[0] if len(centers) > 1 else len(wav)
    loud_rms = np.zeros(len(wav), dtype=bool)
    for value, center in zip(rms, centers):
        if value > profile.rms_threshold:
            lo = max(0, center - hop)
            hi = min(len(wav), center + hop)
            loud_rms[lo:hi] = True
    loud = (np.abs(wav) > profile.amplitude_threshold) & loud_rms
    idx = np.nonzero(loud)[0]
    if len(idx) == 0:
        raise ExtractionError("no speech detected")
    return int(idx[0]), int(idx[-1]) + 1


def _fade_edges(wav: np.ndarray, rate: int) -> np.ndarray:
    n = min(int(round(FADE_S * rate)), len(wav) // 2)
    out = wav.copy()
    if n > 0:
        out[:n] *= np.linspace(0.0, 1.0, n, endpoint=False)
        out[-n:] *= np.linspace(1.0, 0.0, n + 1)[1:]
    return out


def section_monophone(wav: np.ndarray, phone: str, profile: SilenceProfile,
                      rate: int = SAMPLE_RATE) -> MonophoneRecord:
    """Split a sustained-phone recording into onset, sustain, and offset.

    The trimmed waveform's short-term RMS crosses its own whole-utterance
    RMS once upward (end of onset) and once downward (start of offset).
    Stop phones only get trimmed: their burst is the whole recording.
    """
    wav = np.asarray(wav, dtype=np.float64)
    start, end = _speech_span(wav, profile, rate)
    trimmed = _fade_edges(wav[start:end], rate)
    if phones.category(phone) is phones.Category.STOP:
        return MonophoneRecord(phone, None, None, None, burst=trimmed)
    warnings = []
    rms, centers = short_term_rms(trimmed, rate)
    whole = np.sqrt(np.mean(trimmed ** 2))
    above = rms > whole
    up = np.nonzero(~above[:-1] & above[1:])[0]
    down = np.nonzero(above[:-1] & ~above[1:])[0]
    if len(up) == 0 or len(down) == 0:
        raise ExtractionError(f"{phone}: no RMS crossings; not a sustained phone?")
    t1 = int(centers[up[0] + 1])
    t2 = int(centers[down[-1] + 1])
    if t2 <= t1:
        raise ExtractionError(f"{phone}: crossings out of order")
    if (t2 - t1) / rate < 0.5:
        warnings.append(f"{phone}: sustain shorter than 0.5 s")
    return MonophoneRecord(
        phone,
        onset=trimmed[:t1],
        sustain=trimmed[t1:t2],
        offset=trimmed[t2:],
        warnings=warnings,
    )


def stft_magnitudes(wav: np.ndarray, rate: int = SAMPLE_RATE) -> tuple[np.ndarray, np.ndarray]:
    """Hann-windowed magnitude STFT; returns (frames x bins, center indexes)."""
    window = max(2, int(round(STFT_WINDOW_S * rate)))
    hop = max(1, int(round(STFT_HOP_S * rate)))
    if len(wav) < window:
        pad = np.zeros(window)
        pad[:len(wav)] = wav
        wav = pad
    hann = np.hanning(window)
    starts = np.arange(0, len(wav) - window + 1, hop)
    frames = np.stack([wav[s:s + window] * hann for s in starts])
    mags = np.abs(np.fft.rfft(frames, axis=1))
    centers = starts + window // 2
    return mags, centers


def average_spectrum(sustain: np.ndarray, rate: int = SAMPLE_RATE) -> np.ndarray:
    mags, _ = stft_magnitudes(np.asarray(sustain, dtype=np.float64), rate)
    return mags.mean(axis=0)


def spectral_distance(s1: np.ndarray, s2: np.ndarray) -> float:
    """Similarity of two magnitude spectra; zero when identical, else
    negative. A small floor keeps near-silent bins from dominating."""
    s1 = np.asarray(s1, dtype=np.float64) + SPECTRAL_FLOOR
    s2 = np.asarray(s2, dtype=np.float64) + SPECTRAL_FLOOR
    if s1.shape != s2.shape:
        raise ExtractionError("spectra have different bin counts")
    d = float(np.sum(np.maximum(s1, s2) / np.minimum(s1, s2) - 1.0))
    return float(np.log(1.0 / (d + 1.0)))


def _smooth_line(line: np.ndarray, frames: int = DISTANCE_SMOOTHING_FRAMES) -> np.ndarray:
    if len(line) < 2:
        return line
    kernel = np.ones(min(frames, len(line)))
    weight = np.convolve(np.ones(len(line)), kernel, mode="same")
    return np.convolve(line, kernel, mode="same") / weight


def distance_line(wav: np.ndarray, spectrum1: np.ndarray, spectrum2: np.ndarray,
                  rate: int = SAMPLE_RATE) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed per-frame (distance to phone2 - distance to phone1)."""
    mags, centers = stft_magnitudes(wav, rate)
    line = np.array([
        spectral_distance(m, spectrum2) - spectral_distance(m, spectrum1)
        for m in mags
    ])
    return _smooth_line(line), centers


def _single_upward_crossing(line: np.ndarray, level: float) -> int:
    above = line > level
    ups = np.nonzero(~above[:-1] & above[1:])[0]
    downs = np.nonzero(above[:-1] & ~above[1:])[0]
    if len(ups) != 1 or len(downs) != 0:
        raise AmbiguousTransitionError(
            f"expected one upward crossing, found {len(ups)} up / {len(downs)} down"
        )
    return int(ups[0] + 1)


def _walk_to_local_min(line: np.ndarray, idx: int) -> int:
    while idx > 0 and line[idx - 1] <= line[idx]:
        idx -= 1
    return idx


def _walk_to_local_max(line: np.ndarray, idx: int) -> int:
    while idx < len(line) - 1 and line[idx + 1] >= line[idx]:
        idx += 1
    return idx


def extract_persistent_diphone(wav: np.ndarray, p1: str, p2: str,
                               profile: SilenceProfile,
                               spectra: dict[str, np.ndarray],
                               rate: int = SAMPLE_RATE) -> np.ndarray:
    """Clip the transition from sustained p1 to sustained p2.

    The distance line must traverse its lower band mean once and its upper
    band mean once, in that order; the clip runs from the local minimum
    behind the lower crossing (maximal closeness to p1) to the local
    maximum past the upper crossing (maximal closeness to p2).
    """
    wav = np.asarray(wav, dtype=np.float64)
    start, end = _speech_span(wav, profile, rate)
    speech = wav[start:end]
    line, centers = distance_line(speech, spectra[p1], spectra[p2], rate)
    if len(line) < 3:
        raise AmbiguousTransitionError("recording too short")
    m = float(np.mean(line))
    below = line[line < m]
    above = line[line > m]
    if len(below) == 0 or len(above) == 0:
        raise AmbiguousTransitionError("flat distance line; re-record")
    lower = float(np.mean(below))
    upper = float(np.mean(above))
    lo_cross = _single_upward_crossing(line, lower)
    hi_cross = _single_upward_crossing(line, upper)
    if hi_cross < lo_cross:
        raise AmbiguousTransitionError("upper mean crossed before lower mean")
    a = _walk_to_local_min(line, lo_cross)
    b = _walk_to_local_max(line, hi_cross)
    clip = speech[int(centers[a]):int(centers[b]) + 1]
    return clip


def extract_stop_diphone(wav: np.ndarray, stop: str, p2: str,
                         profile: SilenceProfile,
                         spectra: dict[str, np.ndarray],
                         rate: int = SAMPLE_RATE) -> tuple[np.ndarray, list[str]]:
    """Clip a stop-to-persistent transition, starting inside the occlusion.

    The normalized distance-to-target line locates the arrival at p2 (upper
    mean crossing advanced to a local maximum); the clip starts at the last
    instant before it where the short-term RMS was under the silence
    threshold, capturing the burst from occlusion silence.
    """
    wav = np.asarray(wav, dtype=np.float64)
    warnings: list[str] = []
    start, end = _speech_span(wav, profile, rate)
    speech = wav[start:end]
    mags, centers = stft_magnitudes(speech, rate)
    raw = np.array([spectral_distance(m, spectra[p2]) for m in mags])
    span = raw.max() - raw.min()
    if span <= 0:
        raise AmbiguousTransitionError("flat distance line; re-record")
    line = _smooth_line((raw - raw.min()) / span)
    m = float(np.mean(line))
    above_levels = line[line > m]
    if len(above_levels) == 0:
        raise AmbiguousTransitionError("flat distance line; re-record")
    upper = float(np.mean(above_levels))
    ups = np.nonzero(~(line[:-1] > upper) & (line[1:] > upper))[0]
    if len(ups) == 0:
        raise AmbiguousTransitionError("no upper-mean crossing")
    b = _walk_to_local_max(line, int(ups[0] + 1))
    end_sample = int(centers[b])
    rms, rms_centers = short_term_rms(wav, rate)
    half_window = int(round(RMS_WINDOW_S * rate)) // 2
    cutoff = start + end_sample
    quiet = [c for v, c in zip(rms, rms_centers)
             if c + half_window < cutoff and v < profile.rms_threshold]
    if quiet:
        # Take the trailing edge of the last all-quiet window: the latest
        # instant known to still be inside the occlusion silence.
        begin = min(int(quiet[-1]) + half_window, cutoff - 1)
    else:
        begin = start
        warnings.append(f"{stop}-{p2}: no pre-burst silence; clipping from span start")
    return wav[begin:start + end_sample + 1], warnings


@dataclass
class DiphoneBank:
    rate: int = SAMPLE_RATE
    clips: dict[tuple[str, str], np.ndarray] = field(default_factory=dict)
    bursts: dict[str, np.ndarray] = field(default_factory=dict)
    smoothing_ms: float = 2.0
    provenance: dict[str, str] = field(default_factory=dict)

    def missing(self) -> list[tuple[str, str]]:
        need = phones.required_diphone_set()
        have = set(self.clips)
        missing = sorted(need - have)
        missing += [
            ("*", p) for p in sorted(phones.STOPS) if p not in self.bursts
        ]
        return missing

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = []
        for (a, b), clip in sorted(self.clips.items()):
            name = f"{a}-{b}.wav"
            write_wav(directory / name, clip, self.rate)
            rows.append((f"{a} {b}", name))
        for p, clip in sorted(self.bursts.items()):
            name = f"{p}-burst.wav"
            write_wav(directory / name, clip, self.rate)
            rows.append((f"{p} burst", name))
        inventory = phones.inventory_report()
        digest = hashlib.sha256(inventory.encode()).hexdigest()[:16]
        with open(directory / "manifest.txt", "w", encoding="utf-8") as f:
            f.write("format: diphonetts-bank-v1\n")
            f.write(f"sample_rate: {self.rate}\n")
            f.write("bit_depth: 24\n")
            f.write("channels: 1\n")
            f.write(f"pulse_smoothing_ms: {self.smoothing_ms}\n")
            f.write(f"rms_window_s: {RMS_WINDOW_S}\n")
            f.write(f"phone_inventory_sha256: {digest}\n")
            for key, value in sorted(self.provenance.items()):
                f.write(f"source {key}: {value}\n")
            f.write("clips:\n")
            for key, name in rows:
                f.write(f"  {key}\t{name}\n")

    @classmethod
    def load(cls, directory: str | Path) -> "DiphoneBank":
        directory = Path(directory)
        manifest = directory / "manifest.txt"
        if not manifest.exists():
            raise ExtractionError(f"{directory}: no manifest.txt")
        bank = cls()
        in_clips = False
        for line in manifest.read_text(encoding="utf-8").splitlines():
            if line.startswith("clips:"):
                in_clips = True
                continue
            if not in_clips:
                if line.startswith("sample_rate:"):
                    bank.rate = int(line.split(":")[1])
                elif line.startswith("pulse_smoothing_ms:"):
                    bank.smoothing_ms = float(line.split(":")[1])
                continue
            key, _, name = line.strip().partition("\t")
            samples, rate = read_wav(directory / name)
            if rate != bank.rate:
                raise ExtractionError(f"{name}: sample rate {rate} != {bank.rate}")
            a, b = key.split()
            if b == "burst":
                bank.bursts[a] = samples
            else:
                bank.clips[(a, b)] = samples
        return bank


def assemble_bank(records: dict[str, MonophoneRecord],
                  clips: dict[tuple[str, str], np.ndarray],
                  rate: int = SAMPLE_RATE,
                  smoothing_ms: float = 2.0) -> tuple[DiphoneBank, list[tuple[str, str]]]:
    """Combine extraction products into a bank plus a missing-diphone report.

    Silence-adjacent diphones come from the monophone onsets and offsets;
    stop-terminated and stop-to-stop transitions are intentionally absent
    (bursts and offsets substitute at synthesis time).
    """
    bank = DiphoneBank(rate=rate, smoothing_ms=smoothing_ms)
    bank.clips.update(clips)
    for phone, rec in records.items():
        if rec.burst is not None:
            bank.bursts[phone] = rec.burst
        if rec.onset is not None and len(rec.onset):
            bank.clips.setdefault((phones.SILENCE, phone), rec.onset)
        if rec.offset is not None and len(rec.offset):
            bank.clips.setdefault((phone, phones.SILENCE), rec.offset)
    return bank, bank.missing()
