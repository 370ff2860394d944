"""Synthetic diphone bank generation.

Builds a complete, deterministic voice without any recordings: sonorants
are glottal-style pulse trains whose pulse shape carries phone-specific
resonances (so pulse detection and pitch shifting behave like they do on
speech), obstruents are band-shaped noise, and stops are short damped
bursts. Useful for tests, demos, and benchmarking.
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from . import phones
from .audio_io import SAMPLE_RATE
from .extraction import DiphoneBank

F0 = 120.0
CLIP_S = 0.16
EDGE_FADE_S = 0.004


def _seed(phone: str, extra: int = 0) -> int:
    return zlib.crc32(phone.encode()) ^ (extra * 0x9E3779B1) & 0xFFFFFFFF


def _resonances(phone: str) -> np.ndarray:
    rng = np.random.default_rng(_seed(phone, 1))
    return rng.uniform(300.0, 2600.0, size=3)


def _pulse_shape(phone: str, rate: int) -> np.ndarray:
    n = int(0.006 * rate)
    t = np.arange(n) / rate
    shape = np.zeros(n)
    for i, f in enumerate(_resonances(phone)):
        shape += np.sin(2 * np.pi * f * t) / (i + 1)
    shape *= np.hanning(n)
    peak = np.max(np.abs(shape))
    return shape / peak if peak > 0 else shape


def _pulse_train(shape_a: np.ndarray, shape_b: np.ndarray, n: int,
                 rate: int, amplitude: float = 0.45) -> np.ndarray:
    """Pulses every 1/F0 seconds, morphing from shape_a to shape_b."""
    period = int(round(rate / F0))
    out = np.zeros(n + len(shape_a))
    positions = np.arange(period // 2, n, period)
    for pos in positions:
        w = pos / max(n - 1, 1)
        shape = (1.0 - w) * shape_a + w * shape_b
        out[pos:pos + len(shape)] += amplitude * shape
    return out[:n]


def _noise_texture(phone: str, n: int, rate: int,
                   amplitude: float = 0.22) -> np.ndarray:
    rng = np.random.default_rng(_seed(phone, 2))
    noise = rng.standard_normal(n)
    spectrum = np.fft.rfft(noise)
    freqs = np.fft.rfftfreq(n, 1.0 / rate)
    mask = np.full_like(freqs, 0.08)
    for f in _resonances(phone) * 2.0:
        mask += np.exp(-0.5 * ((freqs - f) / 400.0) ** 2)
    shaped = np.fft.irfft(spectrum * mask, n)
    peak = np.max(np.abs(shaped))
    return amplitude * shaped / peak if peak > 0 else shaped


def _burst(phone: str, rate: int) -> np.ndarray:
    rng = np.random.default_rng(_seed(phone, 3))
    n = int(0.012 * rate)
    click = rng.standard_normal(n) * np.exp(-np.arange(n) / (0.002 * rate))
    click[: int(0.0005 * rate)] *= np.linspace(0, 1, int(0.0005 * rate))
    peak = np.max(np.abs(click))
    return 0.5 * click / peak if peak > 0 else click


def _edge_fade(wav: np.ndarray, rate: int, head: bool, tail: bool) -> np.ndarray:
    n = int(EDGE_FADE_S * rate)
    out = wav.copy()
    if head and n < len(out):
        out[:n] *= np.linspace(0.0, 1.0, n)
    if tail and n < len(out):
        out[-n:] *= np.linspace(1.0, 0.0, n)
    return out


def _crossfade(a: np.ndarray, b: np.ndarray, rate: int) -> np.ndarray:
    """Equal-length mix ramping from texture a to texture b."""
    n = min(len(a), len(b))
    t = np.arange(n) / max(n - 1, 1)
    ramp = 0.5 - 0.5 * np.cos(np.pi * t)
    return a[:n] * (1.0 - ramp) + b[:n] * ramp


def _voiced(p: str) -> bool:
    return phones.category(p) is phones.Category.SONORANT


def make_clip(a: str, b: str, rate: int = SAMPLE_RATE) -> np.ndarray:
    """Synthetic transition from phone a to phone b."""
    n = int(CLIP_S * rate)
    sil = phones.SILENCE
    if a == sil or b == sil:
        other = b if a == sil else a
        if _voiced(other):
            shape = _pulse_shape(other, rate)
            body = _pulse_train(shape, shape, n, rate)
        else:
            body = _noise_texture(other, n, rate)
        env = np.linspace(0.0, 1.0, n) if a == sil else np.linspace(1.0, 0.0, n)
        return _edge_fade(body * env, rate, head=True, tail=True)
    va, vb = _voiced(a), _voiced(b)
    if va and vb:
        body = _pulse_train(_pulse_shape(a, rate), _pulse_shape(b, rate), n, rate)
        return _edge_fade(body, rate, head=True, tail=True)
    if va and not vb:
        head = _pulse_train(_pulse_shape(a, rate), _pulse_shape(a, rate), n, rate)
        tail = _noise_texture(b, n, rate)
        return _edge_fade(_crossfade(head, tail, rate), rate, head=True, tail=True)
    if not va and vb:
        if phones.category(a) is phones.Category.STOP:
            burst = _burst(a, rate)
            shape = _pulse_shape(b, rate)
            body = _pulse_train(shape, shape, n - len(burst), rate)
            body *= np.linspace(0.3, 1.0, len(body))
            return _edge_fade(np.concatenate([burst, body]), rate,
                              head=True, tail=True)
        head = _noise_texture(a, n, rate)
        tail = _pulse_train(_pulse_shape(b, rate), _pulse_shape(b, rate), n, rate)
        return _edge_fade(_crossfade(head, tail, rate), rate, head=True, tail=True)
    body = _crossfade(_noise_texture(a, n, rate), _noise_texture(b, n, rate), rate)
    return _edge_fade(body, rate, head=True, tail=True)


def build_fixture_bank(directory: str | Path,
                       rate: int = SAMPLE_RATE) -> DiphoneBank:
    """Generate and save a complete synthetic bank."""
    bank = DiphoneBank(rate=rate, smoothing_ms=2.0)
    bank.provenance["generator"] = "synthetic-fixture-v1"
    for pair in sorted(phones.required_diphone_set()):
        bank.clips[pair] = make_clip(*pair, rate)
    for stop in sorted(phones.STOPS):
        bank.bursts[stop] = _burst(stop, rate)
    bank.save(directory)
    return bank
