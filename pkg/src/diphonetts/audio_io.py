"""RIFF WAV reading and writing.

The engine stores all audio as mono, 48 kHz, 24-bit PCM. The reader accepts
16/24/32-bit integer PCM and 32-bit float, mono or multichannel (averaged
down), returning float64 samples in [-1, 1]. The writer emits packed
little-endian 24-bit PCM.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

SAMPLE_RATE = 48000
BIT_DEPTH = 24

_WAVE_FORMAT_PCM = 0x0001
_WAVE_FORMAT_IEEE_FLOAT = 0x0003
_WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class WavError(IOError):
    pass


def _decode_pcm(data: bytes, bits: int) -> np.ndarray:
    if bits == 16:
        x = np.frombuffer(data, dtype="<i2").astype(np.float64)
        return x / 2 ** 15
    if bits == 24:
        raw = np.frombuffer(data, dtype=np.uint8)
        raw = raw[: len(raw) - len(raw) % 3].reshape(-1, 3)
        x = (
            raw[:, 0].astype(np.int32)
            | (raw[:, 1].astype(np.int32) << 8)
            | (raw[:, 2].astype(np.int32) << 16)
        )
        x = np.where(x >= 1 << 23, x - (1 << 24), x)
        return x.astype(np.float64) / 2 ** 23
    if bits == 32:
        x = np.frombuffer(data, dtype="<i4").astype(np.float64)
        return x / 2 ** 31
    raise WavError(f"unsupported PCM bit depth: {bits}")


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a RIFF WAV file into (float64 mono samples in [-1, 1], rate)."""
    blob = Path(path).read_bytes()
    if len(blob) < 12 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise WavError(f"{path}: not a RIFF WAVE file")
    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(blob):
        cid = blob[pos:pos + 4]
        size = struct.unpack("<I", blob[pos + 4:pos + 8])[0]
        body = blob[pos + 8:pos + 8 + size]
        if cid == b"fmt ":
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif cid == b"data":
            data = body
        pos += 8 + size + (size & 1)
    if fmt is None or data is None:
        raise WavError(f"{path}: missing fmt or data chunk")
    audio_format, channels, rate, _, _, bits = fmt
    if audio_format == _WAVE_FORMAT_EXTENSIBLE:
        # Sub-format GUID starts with the base format code.
        raise WavError(f"{path}: WAVE_FORMAT_EXTENSIBLE not supported")
    if audio_format == _WAVE_FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise WavError(f"{path}: only 32-bit float supported")
        x = np.frombuffer(data, dtype="<f4").astype(np.float64)
    elif audio_format == _WAVE_FORMAT_PCM:
        x = _decode_pcm(data, bits)
    else:
        raise WavError(f"{path}: unsupported format code {audio_format:#x}")
    if channels > 1:
        x = x[: len(x) - len(x) % channels].reshape(-1, channels).mean(axis=1)
    return x, rate


def _encode_24(x: np.ndarray) -> bytes:
    scaled = np.clip(np.rint(x * (2 ** 23 - 1)), -(2 ** 23), 2 ** 23 - 1)
    ints = scaled.astype(np.int32)
    out = np.empty((len(ints), 3), dtype=np.uint8)
    out[:, 0] = ints & 0xFF
    out[:, 1] = (ints >> 8) & 0xFF
    out[:, 2] = (ints >> 16) & 0xFF
    return out.tobytes()


def wav_bytes(samples: np.ndarray, rate: int = SAMPLE_RATE) -> bytes:
    """Mono 24-bit PCM RIFF encoding of float samples in [-1, 1]."""
    payload = _encode_24(np.asarray(samples, dtype=np.float64))
    block_align = 3
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(payload)),
            b"WAVE",
            b"fmt ",
            struct.pack(
                "<IHHIIHH",
                16,
                _WAVE_FORMAT_PCM,
                1,
                rate,
                rate * block_align,
                block_align,
                BIT_DEPTH,
            ),
            b"data",
            struct.pack("<I", len(payload)),
        ]
    )
    return header + payload


def write_wav(path: str | Path, samples: np.ndarray, rate: int = SAMPLE_RATE) -> None:
    Path(path).write_bytes(wav_bytes(samples, rate))
