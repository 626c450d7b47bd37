"""Stereo beep synthesis and a byte-exact 16-bit PCM WAV writer."""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from os import PathLike
from typing import Mapping, Union

import numpy as np

from .decision import Category
from .errors import InvalidInputError

FADE_MS = 5.0


@dataclass(frozen=True)
class BeepSpec:
    frequency: float
    duration_ms: float = 250.0
    sample_rate: int = 44100
    amplitude: float = 0.8

    def __post_init__(self) -> None:
        if not 0 < self.frequency < self.sample_rate / 2:
            raise InvalidInputError(f"frequency {self.frequency} Hz must be in (0, {self.sample_rate / 2})")
        if self.duration_ms <= 0:
            raise InvalidInputError("duration must be positive")
        if not 0 < self.amplitude <= 1:
            raise InvalidInputError("amplitude must be in (0, 1]")

    @property
    def n_frames(self) -> int:
        return round(self.duration_ms * self.sample_rate / 1000)


DEFAULT_BEEPS: Mapping[Category, BeepSpec] = {
    Category.IMMEDIATE: BeepSpec(880.0),
    Category.APPROACHING: BeepSpec(440.0),
}


@dataclass
class StereoPcm:
    """Stereo 16-bit PCM; ``frames`` is an ``(n, 2)`` int16 array with columns L, R."""

    sample_rate: int
    frames: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int16))

    def __post_init__(self) -> None:
        f = np.asarray(self.frames)
        if f.ndim != 2 or f.shape[1] != 2:
            raise InvalidInputError(f"frames must have shape (n, 2), got {f.shape}")
        if f.dtype != np.int16:
            if f.size and (f.min() < -32768 or f.max() > 32767):
                raise InvalidInputError("samples outside the 16-bit range")
            f = f.astype(np.int16)
        self.frames = f

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def left(self) -> np.ndarray:
        return self.frames[:, 0]

    @property
    def right(self) -> np.ndarray:
        return self.frames[:, 1]


def pan_gains(pan: float) -> tuple[float, float]:
    """Constant-power gains: theta = (pan + 1) * pi / 4, L = cos, R = sin."""
    if not -1.0 <= pan <= 1.0:
        raise InvalidInputError(f"pan {pan} outside [-1, 1]")
    theta = (pan + 1.0) * math.pi / 4.0
    return math.cos(theta), math.sin(theta)


def _envelope(n: int, sample_rate: int, duration_ms: float) -> np.ndarray:
    env = np.ones(n)
    if duration_ms < 2 * FADE_MS:
        return env
    ramp = min(round(FADE_MS * sample_rate / 1000), n // 2)
    if ramp > 0:
        up = np.arange(ramp) / ramp
        env[:ramp] = up
        env[n - ramp :] = up[::-1]
    return env


def synth_beep(
    category: Category,
    pan: float = 0.0,
    specs: Mapping[Category, BeepSpec] = DEFAULT_BEEPS,
) -> StereoPcm:
    """Render one alert beep. Silent yields an empty buffer."""
    left_gain, right_gain = pan_gains(pan)
    category = Category(category)
    if category is Category.SILENT:
        rate = next((s.sample_rate for s in specs.values()), 44100)
        return StereoPcm(rate)
    spec = specs[category]
    n = spec.n_frames
    t = np.arange(n) / spec.sample_rate
    mono = spec.amplitude * 32767.0 * np.sin(2.0 * math.pi * spec.frequency * t)
    mono *= _envelope(n, spec.sample_rate, spec.duration_ms)
    frames = np.rint(np.stack([mono * left_gain, mono * right_gain], axis=1))
    return StereoPcm(spec.sample_rate, frames.astype(np.int16))


def wav_bytes(pcm: StereoPcm) -> bytes:
    channels, bits = 2, 16
    block_align = channels * bits // 8
    data = pcm.frames.astype("<i2", copy=False).tobytes()
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(data)),
            b"WAVE",
            b"fmt ",
            struct.pack("<IHHIIHH", 16, 1, channels, pcm.sample_rate, pcm.sample_rate * block_align, block_align, bits),
            b"data",
            struct.pack("<I", len(data)),
        ]
    )
    return header + data


def write_wav(pcm: StereoPcm, path: Union[str, PathLike]) -> None:
    with open(path, "wb") as fh:
        fh.write(wav_bytes(pcm))
