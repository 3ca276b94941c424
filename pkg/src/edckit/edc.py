"""Similarity-driven local attention on spectrogram frames.

Re-expresses every frame of a T x F time-frequency matrix as a
softmax-weighted average of the frames inside a per-frame window.  The
window is chosen from the data itself: the dot-product similarity of a
frame to its past and to its future, softmaxed into a probability
distribution over time offsets, gives the expected distance of related
content in each direction.  Each term of that expectation is discounted
by an attenuation ``exp(-distance / alpha)``.

``alpha`` acts as a time constant, so larger values widen the selectable
range.  Offsets whose attenuation falls below ``cutoff`` are excluded
outright, which bounds every window half at
``max_reach = floor(alpha * ln(1 / cutoff))`` frames and makes the total
selectable window ``2 * max_reach`` regardless of the input.

The whole transform is deterministic: no randomness, no trainable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PAST = "past"
FUTURE = "future"

_ROUNDING_MODES = ("nearest", "floor")


@dataclass(frozen=True)
class AttenuationConfig:
    """Attenuation time constant plus the cutoff that bounds reachable offsets.

    ``rounding`` controls how the real-valued expected offsets become
    integer window radii: "nearest" rounds half away from zero, "floor"
    truncates.
    """

    alpha: float
    cutoff: float = 0.02
    rounding: str = "nearest"

    def __post_init__(self):
        if not (self.alpha > 0):
            raise ValueError("alpha must be positive")
        if not (0.0 < self.cutoff < 1.0):
            raise ValueError("cutoff must be in (0, 1)")
        if self.rounding not in _ROUNDING_MODES:
            raise ValueError(f"rounding must be one of {_ROUNDING_MODES}")

    @property
    def max_reach(self) -> int:
        """Largest offset whose attenuation still clears the cutoff."""
        return int(math.floor(self.alpha * math.log(1.0 / self.cutoff)))


@dataclass(frozen=True)
class EffectiveRangeMask:
    """Per-frame contiguous windows plus their additive-mask realization.

    Frame i's window is [i - past_reach[i], i + future_reach[i]] and always
    contains i itself.  ``phi`` holds 0.0 inside the window and -inf
    outside; the -inf entries are a sentinel only, the weight computation
    never feeds them through arithmetic.
    """

    phi: np.ndarray
    past_reach: np.ndarray
    future_reach: np.ndarray

    @property
    def in_range(self) -> np.ndarray:
        return self.phi == 0.0


def _as_finite_2d(matrix) -> np.ndarray:
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError("expected a 2-D matrix with at least one row and column")
    if not np.all(np.isfinite(x)):
        raise ValueError("matrix entries must be finite")
    return x


def _softmax(values: np.ndarray) -> np.ndarray:
    shifted = np.exp(values - values.max())
    return shifted / shifted.sum()


def _round_offset(value: float, rounding: str) -> int:
    if rounding == "nearest":
        return int(math.floor(value + 0.5))  # ties away from zero; value >= 0
    return int(math.floor(value))


def similarity_matrix(spec) -> np.ndarray:
    """Gram matrix of frames: entry (i, j) is the raw dot product of
    frames i and j, with no normalization."""
    x = _as_finite_2d(spec)
    return x @ x.T


def split_similarity(omega_row, frame: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a similarity row at ``frame`` (0-based) into its past half
    (everything up to and including the frame) and future half (the frame
    onward).  Both halves contain the self-similarity entry."""
    row = np.asarray(omega_row, dtype=np.float64)
    if row.ndim != 1 or row.size == 0:
        raise ValueError("similarity row must be a non-empty vector")
    if not 0 <= frame < row.size:
        raise ValueError(f"frame {frame} out of range for {row.size} frames")
    return row[: frame + 1].copy(), row[frame:].copy()


def expected_offset(sim_vec, direction: str, config: AttenuationConfig) -> float:
    """Attenuated expectation of the distance to similar content.

    ``sim_vec`` is one half of a similarity row; ``direction`` states
    which one.  Positions map to distances from the current frame (the
    half's last entry for "past", its first for "future"), the similarity
    values are softmaxed (max-subtracted) into probabilities, and the
    expected distance is accumulated with each term scaled by
    ``exp(-distance / alpha)``.  Distances beyond ``config.max_reach``
    contribute exactly zero.
    """
    values = np.asarray(sim_vec, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("similarity vector must be a non-empty vector")
    if not np.all(np.isfinite(values)):
        raise ValueError("similarity vector must be finite")
    if direction == PAST:
        offsets = np.arange(values.size - 1, -1, -1, dtype=np.float64)
    elif direction == FUTURE:
        offsets = np.arange(values.size, dtype=np.float64)
    else:
        raise ValueError(f"direction must be {PAST!r} or {FUTURE!r}")

    probs = _softmax(values)
    attenuation = np.exp(-offsets / config.alpha)
    attenuation[offsets > config.max_reach] = 0.0
    return float(np.sum(offsets * probs * attenuation))


def build_range_mask(omega, config: AttenuationConfig) -> EffectiveRangeMask:
    """Turn a similarity matrix into per-frame windows.

    Each frame's expected offsets toward past and future are rounded per
    ``config.rounding`` and clamped to the matrix bounds; the resulting
    window becomes a row of the additive mask.
    """
    om = _as_finite_2d(omega)
    t = om.shape[0]
    if om.shape[1] != t:
        raise ValueError("similarity matrix must be square")

    past = np.empty(t, dtype=np.int64)
    future = np.empty(t, dtype=np.int64)
    for i in range(t):
        back = expected_offset(om[i, : i + 1], PAST, config)
        ahead = expected_offset(om[i, i:], FUTURE, config)
        past[i] = min(_round_offset(back, config.rounding), i)
        future[i] = min(_round_offset(ahead, config.rounding), t - 1 - i)

    phi = np.full((t, t), -np.inf)
    for i in range(t):
        phi[i, i - past[i] : i + future[i] + 1] = 0.0
    return EffectiveRangeMask(phi=phi, past_reach=past, future_reach=future)


def masked_softmax(omega, mask: EffectiveRangeMask) -> np.ndarray:
    """Row softmax of the similarity matrix restricted to each frame's
    window.  Out-of-window weights are exactly 0 (set, not computed);
    in-window entries are max-subtracted before exponentiation."""
    om = _as_finite_2d(omega)
    inside = mask.in_range
    row_max = np.max(np.where(inside, om, -np.inf), axis=1, keepdims=True)
    weights = np.zeros_like(om)
    weights[inside] = np.exp((om - row_max)[inside])
    return weights / weights.sum(axis=1, keepdims=True)


def attention_weights(spec, config: AttenuationConfig) -> np.ndarray:
    """Row-stochastic weight matrix the conditioner applies to the input."""
    x = _as_finite_2d(spec)
    omega = x @ x.T
    return masked_softmax(omega, build_range_mask(omega, config))


def apply_edc(spec, config: AttenuationConfig) -> np.ndarray:
    """Condition a spectrogram: each output frame is the weighted average
    of the input frames inside its window (a convex combination, so a
    single-frame window reproduces the input frame exactly)."""
    x = _as_finite_2d(spec)
    return attention_weights(x, config) @ x


def max_reach_table(alphas, cutoff: float = 0.02) -> list[tuple[float, int]]:
    """Total selectable window, both directions combined, per alpha."""
    table = []
    for alpha in alphas:
        config = AttenuationConfig(alpha=float(alpha), cutoff=cutoff)
        table.append((float(alpha), 2 * config.max_reach))
    return table
