"""Log mel-bank energy extraction: Hamming STFT plus triangular mel filters."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .audio_io import AudioClip
from .errors import ShortClipError


@dataclass(frozen=True)
class SpectrogramConfig:
    """Extraction knobs. Window sizes are given in milliseconds and turned
    into samples per clip, so the sample rate stays data-driven."""

    window_ms: float = 40.0
    hop_ms: float = 20.0
    n_mels: int = 64
    fmin: float = 0.0
    fmax: float | None = None  # None means Nyquist
    log_floor: float = 1e-10

    def __post_init__(self):
        if not (0 < self.hop_ms <= self.window_ms):
            raise ValueError("need 0 < hop_ms <= window_ms")
        if self.n_mels < 1:
            raise ValueError("n_mels must be >= 1")
        if self.fmin < 0:
            raise ValueError("fmin must be >= 0")
        if self.fmax is not None and self.fmax <= self.fmin:
            raise ValueError("fmax must exceed fmin")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")

    def window_samples(self, sample_rate: int) -> int:
        return int(round(self.window_ms * sample_rate / 1000.0))

    def hop_samples(self, sample_rate: int) -> int:
        return int(round(self.hop_ms * sample_rate / 1000.0))

    def nfft(self, sample_rate: int) -> int:
        win = self.window_samples(sample_rate)
        return 1 << (win - 1).bit_length()


@dataclass(frozen=True)
class MelSpectrogram:
    """T x n_mels matrix of natural-log mel-band power."""

    frames: np.ndarray
    frame_rate: float
    config: SpectrogramConfig


def frame_count(num_samples: int, window: int, hop: int) -> int:
    """Frames that fit entirely inside the signal (no tail padding)."""
    return (num_samples - window) // hop + 1


def stft_power(clip: AudioClip, config: SpectrogramConfig) -> np.ndarray:
    """Power of the Hamming-windowed half-spectrum, one row per frame.

    nfft is the next power of two at or above the window length; the
    window tail is zero-padded up to it.
    """
    win = config.window_samples(clip.sample_rate)
    hop = config.hop_samples(clip.sample_rate)
    if clip.samples.size < win:
        raise ShortClipError(
            f"clip of {clip.samples.size} samples is shorter than one "
            f"{win}-sample window"
        )
    frames = np.lib.stride_tricks.sliding_window_view(clip.samples, win)[::hop]
    spectrum = np.fft.rfft(frames * np.hamming(win), n=config.nfft(clip.sample_rate), axis=1)
    return spectrum.real**2 + spectrum.imag**2


def _hz_to_mel(freq):
    return 2595.0 * np.log10(1.0 + np.asarray(freq, dtype=np.float64) / 700.0)


def _mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@lru_cache(maxsize=32)
def _filterbank(config: SpectrogramConfig, sample_rate: int, nfft: int) -> np.ndarray:
    fmax = config.fmax if config.fmax is not None else sample_rate / 2.0
    edges = _mel_to_hz(np.linspace(_hz_to_mel(config.fmin), _hz_to_mel(fmax), config.n_mels + 2))
    freqs = np.arange(nfft // 2 + 1) * (sample_rate / nfft)

    lower = edges[:-2, None]
    center = edges[1:-1, None]
    upper = edges[2:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        rising = (freqs[None, :] - lower) / (center - lower)
        falling = (upper - freqs[None, :]) / (upper - center)
    weights = np.maximum(0.0, np.minimum(rising, falling))
    weights = np.nan_to_num(weights, nan=0.0, posinf=0.0, neginf=0.0)

    peaks = weights.max(axis=1)
    if np.any(peaks <= 0):
        raise ValueError(
            f"n_mels={config.n_mels} too dense for nfft={nfft} at {sample_rate} Hz: "
            "some filter covers no FFT bin"
        )
    weights /= peaks[:, None]
    weights.setflags(write=False)
    return weights


def mel_filterbank(config: SpectrogramConfig, sample_rate: int, nfft: int) -> np.ndarray:
    """Triangular filters on the HTK mel scale, peak-normalized to 1,
    covering [fmin, fmax]. Shape: n_mels x (nfft/2 + 1). Cached per
    (config, sample_rate, nfft); the returned array is read-only."""
    return _filterbank(config, int(sample_rate), int(nfft))


def log_mel(clip: AudioClip, config: SpectrogramConfig = SpectrogramConfig()) -> MelSpectrogram:
    """Natural log of mel-filtered STFT power, floored at config.log_floor."""
    power = stft_power(clip, config)
    bank = mel_filterbank(config, clip.sample_rate, config.nfft(clip.sample_rate))
    frames = np.log(np.maximum(power @ bank.T, config.log_floor))
    return MelSpectrogram(frames=frames, frame_rate=1000.0 / config.hop_ms, config=config)
