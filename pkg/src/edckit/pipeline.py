"""Training-set construction: pad, condition, and batch-process manifests."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import augment
from .audio_io import FeatureMeta, FeatureTensor, Manifest, load_wav, write_features
from .edc import AttenuationConfig, apply_edc
from .errors import ManifestError
from .features import MelSpectrogram, SpectrogramConfig, log_mel


class DatasetMode(Enum):
    OM = "om"  # conditioned features replace the originals
    AM = "am"  # originals plus conditioned copies: doubles the set


@dataclass(frozen=True)
class NoConditioning:
    tag = "none"


@dataclass(frozen=True)
class EdcConditioning:
    attenuation: AttenuationConfig
    tag = "edc"


@dataclass(frozen=True)
class SpecAugmentConditioning:
    config: augment.SpecAugmentConfig
    tag = "specaugment"


@dataclass(frozen=True)
class MixupConditioning:
    beta: float = 0.2
    seed: int = 0
    tag = "mixup"

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")


ConditioningMethod = (
    NoConditioning | EdcConditioning | SpecAugmentConditioning | MixupConditioning
)


@dataclass(frozen=True)
class LabeledClip:
    """Feature payload plus a multi-hot label vector (real-valued in [0, 1]
    once a clip has been mixed)."""

    clip_id: str
    features: MelSpectrogram
    labels: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.float64)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1:
            raise ValueError("labels must be a vector")
        if labels.size and (labels.min() < 0 or labels.max() > 1):
            raise ValueError("labels must lie in [0, 1]")


def pad_to_frames(spec: MelSpectrogram, target_frames: int) -> MelSpectrogram:
    """Edge-replicate the final frame up to target_frames, or truncate."""
    if target_frames < 1:
        raise ValueError("target_frames must be >= 1")
    t = spec.frames.shape[0]
    if t == target_frames:
        return spec
    if t > target_frames:
        frames = spec.frames[:target_frames].copy()
    else:
        tail = np.repeat(spec.frames[-1:], target_frames - t, axis=0)
        frames = np.concatenate([spec.frames, tail], axis=0)
    return replace(spec, frames=frames)


def _derangement(n: int, rng) -> np.ndarray:
    # rejection sampling; acceptance probability tends to 1/e
    while True:
        perm = rng.permutation(n)
        if not np.any(perm == np.arange(n)):
            return perm


def _with_frames(clip: LabeledClip, frames: np.ndarray, provenance: dict) -> LabeledClip:
    return replace(clip, features=replace(clip.features, frames=frames), provenance=provenance)


def _conditioned(clips: list[LabeledClip], method: ConditioningMethod) -> list[LabeledClip]:
    if isinstance(method, NoConditioning):
        return [replace(c, provenance={"method": method.tag}) for c in clips]

    if isinstance(method, EdcConditioning):
        return [
            _with_frames(c, apply_edc(c.features.frames, method.attenuation), {"method": method.tag})
            for c in clips
        ]

    if isinstance(method, SpecAugmentConditioning):
        children = np.random.SeedSequence(method.config.seed).spawn(len(clips))
        out = []
        for clip, child in zip(clips, children):
            plan = augment.draw_plan(
                method.config, clip.features.frames.shape, rng=np.random.default_rng(child)
            )
            out.append(
                _with_frames(
                    clip,
                    augment.apply_plan(clip.features.frames, plan),
                    {"method": method.tag, "draws": plan.to_params()},
                )
            )
        return out

    if isinstance(method, MixupConditioning):
        if len(clips) < 2:
            raise ValueError("mixup needs at least two clips")
        rng = np.random.default_rng(method.seed)
        partners = _derangement(len(clips), rng)
        out = []
        for clip, j in zip(clips, partners):
            other = clips[int(j)]
            lam = augment.draw_mixup_lambda(method.beta, rng)
            frames, labels = augment.mixup(
                clip.features.frames, clip.labels, other.features.frames, other.labels, lam
            )
            out.append(
                replace(
                    clip,
                    features=replace(clip.features, frames=frames),
                    labels=labels,
                    provenance={"method": method.tag, "lambda": lam, "partner": other.clip_id},
                )
            )
        return out

    raise TypeError(f"unknown conditioning method: {method!r}")


def build_training_set(
    clips, method: ConditioningMethod, mode: DatasetMode
) -> list[LabeledClip]:
    """Original-size mode replaces every clip with its conditioned version;
    augmented mode appends the conditioned copies after the originals
    (with no conditioning that simply duplicates each clip)."""
    clips = list(clips)
    if not clips:
        raise ValueError("clip list is empty")
    conditioned = _conditioned(clips, method)
    if mode is DatasetMode.OM:
        return conditioned
    return clips + conditioned


def _method_params(method: ConditioningMethod) -> dict:
    if isinstance(method, NoConditioning):
        return {"tag": method.tag}
    if isinstance(method, EdcConditioning):
        return {"tag": method.tag, **asdict(method.attenuation)}
    if isinstance(method, SpecAugmentConditioning):
        return {"tag": method.tag, **asdict(method.config)}
    return {"tag": method.tag, "beta": method.beta, "seed": method.seed}


def process_manifest(
    manifest: Manifest,
    spec_config: SpectrogramConfig,
    method: ConditioningMethod,
    mode: DatasetMode,
    out_dir,
    *,
    target_frames: int | None = None,
    workers: int = 4,
    base_dir=None,
) -> dict:
    """Extract, pad, condition, and serialize every manifest entry.

    Feature files land in out_dir as <clip_id>.<method>.edcf (an ordinal
    is inserted when a name repeats, e.g. duplicated originals in
    augmented mode) next to a summary.json.  Per-clip failures are
    recorded in the summary and do not abort the batch.  With
    target_frames unset, each clip is padded to round(duration x frame
    rate), e.g. 500 frames for 10 s at a 20 ms hop.
    """
    if not manifest.entries:
        raise ManifestError("empty manifest")
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    base = Path(base_dir) if base_dir is not None else Path(".")

    def extract(entry):
        clip = load_wav(base / entry.path)
        spec = log_mel(clip, spec_config)
        if target_frames is not None:
            target = target_frames
        else:
            target = int(round(clip.samples.size / spec_config.hop_samples(clip.sample_rate)))
        spec = pad_to_frames(spec, max(target, 1))
        return LabeledClip(
            clip_id=Path(entry.path).stem,
            features=spec,
            labels=np.asarray(entry.labels, dtype=np.float64),
        )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(extract, entry) for entry in manifest.entries]
        loaded: list[LabeledClip] = []
        failures = []
        for entry, future in zip(manifest.entries, futures):
            try:
                loaded.append(future.result())
            except Exception as exc:  # per-clip isolation
                failures.append({"path": entry.path, "error": str(exc)})

    # disambiguate repeated stems so outputs never overwrite each other
    seen: dict[str, int] = {}
    deduped = []
    for clip in loaded:
        count = seen.get(clip.clip_id, 0)
        seen[clip.clip_id] = count + 1
        deduped.append(clip if count == 0 else replace(clip, clip_id=f"{clip.clip_id}-{count + 1}"))

    dataset = build_training_set(deduped, method, mode) if deduped else []

    outputs = []
    used: dict[str, int] = {}
    for clip in dataset:
        tag = clip.provenance.get("method", "none")
        stem = f"{clip.clip_id}.{tag}"
        count = used.get(stem, 0)
        used[stem] = count + 1
        name = f"{stem}.edcf" if count == 0 else f"{stem}.{count + 1}.edcf"
        params = {
            "spectrogram": asdict(spec_config),
            "method": _method_params(method),
            "draws": {k: v for k, v in clip.provenance.items() if k != "method"},
        }
        tensor = FeatureTensor(
            data=clip.features.frames.astype(np.float32),
            meta=FeatureMeta(clip_id=clip.clip_id, method=tag, params=params),
        )
        write_features(tensor, out_path / name)
        outputs.append({"file": name, "clip_id": clip.clip_id, "method": tag,
                        "labels": [float(v) for v in clip.labels]})

    summary = {
        "mode": mode.value,
        "method": _method_params(method),
        "counts": {
            "entries": len(manifest.entries),
            "extracted": len(loaded),
            "outputs": len(outputs),
            "failures": len(failures),
        },
        "outputs": outputs,
        "failures": failures,
    }
    (out_path / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return summary
