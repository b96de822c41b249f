"""RIFF/WAVE header probing.

The scheduler needs exact clip durations; this module reads them straight
from the header without decoding any sample data. Only uncompressed PCM
(audioFormat = 1) is accepted.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import CorruptHeader, MissingChunk, NotRiff, UnsupportedCodec


@dataclass(frozen=True)
class AudioClip:
    path: str
    duration_ms: int
    sample_rate_hz: int
    channels: int
    bits_per_sample: int


def probe_wav(data: bytes, path: str = "") -> AudioClip:
    """Parse a RIFF/WAVE header and compute the clip duration in whole ms.

    The chunk walker skips unknown chunks (honoring the odd-size padding
    byte) and never reads past the declared RIFF size. The `data` chunk's
    payload need not be present; its header is enough.
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise NotRiff("missing RIFF/WAVE tags")
    riff_size = struct.unpack_from("<I", data, 4)[0]
    declared_end = 8 + riff_size

    fmt = None
    data_size = None
    pos = 12
    while pos < declared_end and data_size is None:
        if pos + 8 > len(data):
            raise CorruptHeader(f"truncated chunk header at offset {pos}")
        chunk_id = data[pos : pos + 4]
        chunk_size = struct.unpack_from("<I", data, pos + 4)[0]
        if chunk_id == b"fmt ":
            if chunk_size < 16 or pos + 8 + chunk_size > len(data):
                raise CorruptHeader("fmt chunk truncated")
            audio_format, channels, sample_rate = struct.unpack_from("<HHI", data, pos + 8)
            bits_per_sample = struct.unpack_from("<H", data, pos + 22)[0]
            if audio_format != 1:
                raise UnsupportedCodec(f"audioFormat {audio_format} is not PCM")
            fmt = (channels, sample_rate, bits_per_sample)
        elif chunk_id == b"data":
            if pos + 8 + chunk_size > declared_end:
                raise CorruptHeader("data chunk overruns declared RIFF size")
            data_size = chunk_size
        pos += 8 + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise MissingChunk("no fmt chunk")
    if data_size is None:
        raise MissingChunk("no data chunk")

    channels, sample_rate, bits_per_sample = fmt
    byte_rate = sample_rate * channels * bits_per_sample // 8
    if byte_rate == 0:
        raise CorruptHeader("zero byte rate")
    duration_ms = 1000 * data_size // byte_rate
    return AudioClip(
        path=path,
        duration_ms=duration_ms,
        sample_rate_hz=sample_rate,
        channels=channels,
        bits_per_sample=bits_per_sample,
    )


def synthesize_test_wav(
    duration_ms: int, sample_rate_hz: int, channels: int, bits_per_sample: int
) -> bytes:
    """Silent PCM WAV with a canonical 44-byte header (test fixture maker).

    probe_wav on the result reproduces the parameters exactly whenever
    duration_ms * sample_rate_hz / 1000 is a whole number of frames.
    """
    if duration_ms <= 0 or duration_ms > 60_000:
        raise ValueError(f"duration {duration_ms} ms outside 1..60000")
    if sample_rate_hz <= 0 or channels <= 0 or bits_per_sample <= 0:
        raise ValueError("sample rate, channels and bit depth must be positive")
    if bits_per_sample % 8:
        raise ValueError("bits per sample must be a multiple of 8")

    block_align = channels * bits_per_sample // 8
    byte_rate = sample_rate_hz * block_align
    frames = duration_ms * sample_rate_hz // 1000
    data_size = frames * block_align

    header = b"RIFF" + struct.pack("<I", 36 + data_size) + b"WAVE"
    header += b"fmt " + struct.pack(
        "<IHHIIHH", 16, 1, channels, sample_rate_hz, byte_rate, block_align, bits_per_sample
    )
    header += b"data" + struct.pack("<I", data_size)
    return header + bytes(data_size)
