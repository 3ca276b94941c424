"""Deterministic spectrogram feature conditioning toolkit."""

__version__ = "0.1.0"

from .audio_io import (
    AudioClip,
    FeatureMeta,
    FeatureTensor,
    Manifest,
    ManifestEntry,
    load_wav,
    read_features,
    read_manifest,
    write_features,
    write_manifest,
)
from .augment import (
    FreqMask,
    SpecAugmentConfig,
    TimeMask,
    TimeWarp,
    mixup,
    spec_augment,
)
from .edc import (
    AttenuationConfig,
    EffectiveRangeMask,
    apply_edc,
    attention_weights,
    build_range_mask,
    expected_offset,
    max_reach_table,
    similarity_matrix,
    split_similarity,
)
from .features import MelSpectrogram, SpectrogramConfig, log_mel, mel_filterbank, stft_power
from .pipeline import (
    ConditioningMethod,
    DatasetMode,
    EdcConditioning,
    LabeledClip,
    MixupConditioning,
    NoConditioning,
    SpecAugmentConditioning,
    build_training_set,
    pad_to_frames,
    process_manifest,
)

__all__ = [
    "AudioClip",
    "AttenuationConfig",
    "ConditioningMethod",
    "DatasetMode",
    "EdcConditioning",
    "EffectiveRangeMask",
    "FeatureMeta",
    "FeatureTensor",
    "FreqMask",
    "LabeledClip",
    "Manifest",
    "ManifestEntry",
    "MelSpectrogram",
    "MixupConditioning",
    "NoConditioning",
    "SpecAugmentConditioning",
    "SpecAugmentConfig",
    "SpectrogramConfig",
    "TimeMask",
    "TimeWarp",
    "apply_edc",
    "attention_weights",
    "build_range_mask",
    "build_training_set",
    "expected_offset",
    "load_wav",
    "log_mel",
    "max_reach_table",
    "mel_filterbank",
    "mixup",
    "pad_to_frames",
    "process_manifest",
    "read_features",
    "read_manifest",
    "similarity_matrix",
    "spec_augment",
    "split_similarity",
    "stft_power",
    "write_features",
    "write_manifest",
]
