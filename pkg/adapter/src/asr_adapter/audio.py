"""WAV reading/writing on the standard library, samples as float64 in [-1, 1]."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np

from .errors import UnreadableAudio


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Returns (mono samples in [-1, 1], sample rate). 16-bit PCM expected;
    stereo is averaged down to mono."""
    try:
        with wave.open(str(path), "rb") as fh:
            channels = fh.getnchannels()
            width = fh.getsampwidth()
            rate = fh.getframerate()
            frames = fh.readframes(fh.getnframes())
    except (wave.Error, EOFError, OSError) as exc:
        raise UnreadableAudio(f"{path}: {exc}") from exc
    if width != 2:
        raise UnreadableAudio(f"{path}: only 16-bit PCM is supported, got {8 * width}-bit")
    data = np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0
    if channels > 1:
        data = data.reshape(-1, channels).mean(axis=1)
    return data, rate


def write_wav(path: str | Path, samples: np.ndarray, rate: int) -> None:
    clipped = np.clip(samples, -1.0, 1.0)
    pcm = (clipped * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(rate)
        fh.writeframes(pcm.tobytes())
