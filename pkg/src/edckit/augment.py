"""Baseline spectrogram conditioners: SpecAugment-style masking/warping and Mixup."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeMask:
    max_width_frames: int
    num_masks: int = 1

    def __post_init__(self):
        if self.max_width_frames < 1 or self.num_masks < 1:
            raise ValueError("time mask width and count must be >= 1")


@dataclass(frozen=True)
class FreqMask:
    max_width_bins: int
    num_masks: int = 1

    def __post_init__(self):
        if self.max_width_bins < 1 or self.num_masks < 1:
            raise ValueError("frequency mask width and count must be >= 1")


@dataclass(frozen=True)
class TimeWarp:
    max_shift_frames: int

    def __post_init__(self):
        if self.max_shift_frames < 1:
            raise ValueError("warp shift must be >= 1")


@dataclass(frozen=True)
class SpecAugmentConfig:
    time_mask: TimeMask | None = None
    freq_mask: FreqMask | None = None
    time_warp: TimeWarp | None = None
    seed: int = 0

    def __post_init__(self):
        if self.time_mask is None and self.freq_mask is None and self.time_warp is None:
            raise ValueError("no axis enabled")


@dataclass(frozen=True)
class SpecAugmentPlan:
    """Concrete draws for one application; a fixed seed fixes the plan.

    Masked cells are filled with the input tensor's mean (log-domain zeros
    would read as loud events), computed before warping.
    """

    warp: tuple[int, int] | None  # (anchor, shift)
    freq_masks: tuple[tuple[int, int], ...]  # (start_bin, width)
    time_masks: tuple[tuple[int, int], ...]  # (start_frame, width)

    def to_params(self) -> dict:
        return {
            "warp": list(self.warp) if self.warp else None,
            "freq_masks": [list(m) for m in self.freq_masks],
            "time_masks": [list(m) for m in self.time_masks],
        }


def draw_plan(config: SpecAugmentConfig, shape, rng=None) -> SpecAugmentPlan:
    """Draw widths, positions, and the warp anchor/shift for a T x F shape.

    Draw order is fixed (warp, then frequency masks, then time masks) so a
    seed fully determines the plan.
    """
    t, f = shape
    if rng is None:
        rng = np.random.default_rng(config.seed)

    warp = None
    if config.time_warp is not None:
        shift_max = config.time_warp.max_shift_frames
        lo, hi = shift_max + 1, t - shift_max - 2
        if lo > hi:
            raise ValueError(f"warp shift {shift_max} leaves no interior anchor in {t} frames")
        anchor = int(rng.integers(lo, hi + 1))
        shift = int(rng.integers(-shift_max, shift_max + 1))
        warp = (anchor, shift)

    freq_masks = []
    if config.freq_mask is not None:
        if config.freq_mask.max_width_bins > f:
            raise ValueError(f"frequency mask width {config.freq_mask.max_width_bins} exceeds {f} bins")
        for _ in range(config.freq_mask.num_masks):
            width = int(rng.integers(1, config.freq_mask.max_width_bins + 1))
            start = int(rng.integers(0, f - width + 1))
            freq_masks.append((start, width))

    time_masks = []
    if config.time_mask is not None:
        if config.time_mask.max_width_frames > t:
            raise ValueError(f"time mask width {config.time_mask.max_width_frames} exceeds {t} frames")
        for _ in range(config.time_mask.num_masks):
            width = int(rng.integers(1, config.time_mask.max_width_frames + 1))
            start = int(rng.integers(0, t - width + 1))
            time_masks.append((start, width))

    return SpecAugmentPlan(warp=warp, freq_masks=tuple(freq_masks), time_masks=tuple(time_masks))


def _warp_time(spec: np.ndarray, anchor: int, shift: int) -> np.ndarray:
    """Piecewise-linear time remap: the anchor frame moves to anchor+shift,
    the endpoints stay put, frames in between are linearly interpolated."""
    t = spec.shape[0]
    target = anchor + shift
    source = np.empty(t, dtype=np.float64)
    source[: target + 1] = np.linspace(0.0, anchor, target + 1)
    source[target:] = np.linspace(anchor, t - 1.0, t - target)
    base = np.clip(np.floor(source).astype(np.int64), 0, t - 2)
    frac = (source - base)[:, None]
    return spec[base] * (1.0 - frac) + spec[base + 1] * frac


def apply_plan(spec, plan: SpecAugmentPlan) -> np.ndarray:
    out = np.array(spec, dtype=np.float64, copy=True)
    if out.ndim != 2:
        raise ValueError("spectrogram must be 2-D")
    fill = float(out.mean())
    if plan.warp is not None:
        out = _warp_time(out, *plan.warp)
    for start, width in plan.freq_masks:
        out[:, start : start + width] = fill
    for start, width in plan.time_masks:
        out[start : start + width, :] = fill
    return out


def spec_augment(spec, config: SpecAugmentConfig) -> np.ndarray:
    """Apply the configured corruption axes with seeded draws.

    Fixed seed means bit-identical output; cells outside the drawn masks
    (and untouched by warping) are bit-identical to the input.
    """
    x = np.asarray(spec, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("spectrogram must be 2-D")
    return apply_plan(x, draw_plan(config, x.shape))


def mixup(spec_a, labels_a, spec_b, labels_b, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Convex combination of two samples' features and labels."""
    a = np.asarray(spec_a, dtype=np.float64)
    b = np.asarray(spec_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"spectrogram shapes differ: {a.shape} vs {b.shape}")
    ya = np.asarray(labels_a, dtype=np.float64)
    yb = np.asarray(labels_b, dtype=np.float64)
    if ya.shape != yb.shape:
        raise ValueError(f"label shapes differ: {ya.shape} vs {yb.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be in [0, 1]")
    return lam * a + (1.0 - lam) * b, lam * ya + (1.0 - lam) * yb


def draw_mixup_lambda(beta: float, rng) -> float:
    """Beta(beta, beta) mixing weight."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return float(rng.beta(beta, beta))
