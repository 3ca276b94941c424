"""WAV decoding, dataset manifests, and the feature-tensor file format."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    FeatureFormatError,
    MalformedWavError,
    ManifestError,
    UnsupportedWavError,
)

_WAVE_PCM = 0x0001
_WAVE_IEEE_FLOAT = 0x0003
_WAVE_EXTENSIBLE = 0xFFFE

FEATURE_MAGIC = b"EDCF"
FEATURE_VERSION = 1


@dataclass(frozen=True)
class AudioClip:
    """Mono waveform with amplitudes in [-1, 1] (integer sources are
    scaled by their full-scale value; float sources pass through)."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    labels: tuple[int, ...]


@dataclass(frozen=True)
class Manifest:
    entries: list[ManifestEntry]
    class_names: list[str]

    @property
    def num_classes(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True)
class FeatureMeta:
    clip_id: str
    method: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FeatureTensor:
    """T x F float32 matrix plus provenance metadata."""

    data: np.ndarray
    meta: FeatureMeta

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float32)
        object.__setattr__(self, "data", data)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("feature data must be a 2-D matrix with T, F >= 1")
        if not np.all(np.isfinite(data)):
            raise ValueError("feature data must be finite")


def load_wav(path) -> AudioClip:
    """Decode a PCM or IEEE-float WAV file into a mono clip.

    Multichannel input is averaged down to one channel.  Supported
    encodings: 8/16/24/32-bit integer PCM and 32-bit float.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise MalformedWavError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise MalformedWavError(f"{path}: truncated {chunk_id!r} chunk")
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise MalformedWavError(f"{path}: missing fmt chunk")
    if payload is None:
        raise MalformedWavError(f"{path}: missing data chunk")
    if len(fmt) < 16:
        raise MalformedWavError(f"{path}: fmt chunk too small")

    tag, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if tag == _WAVE_EXTENSIBLE:
        # actual format code sits in the first two bytes of the SubFormat GUID
        if len(fmt) < 26:
            raise MalformedWavError(f"{path}: extensible fmt chunk too small")
        (tag,) = struct.unpack_from("<H", fmt, 24)
    if channels < 1 or rate == 0:
        raise MalformedWavError(f"{path}: invalid channel count or sample rate")

    bytes_per_sample = bits // 8
    if bits % 8 or bytes_per_sample == 0:
        raise UnsupportedWavError(f"{path}: {bits}-bit samples not supported")
    frame_size = channels * bytes_per_sample
    if len(payload) == 0:
        raise MalformedWavError(f"{path}: empty data chunk")
    if len(payload) % frame_size:
        raise MalformedWavError(f"{path}: data chunk is not a whole number of frames")

    if tag == _WAVE_PCM:
        if bits == 8:
            x = (np.frombuffer(payload, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
        elif bits == 16:
            x = np.frombuffer(payload, dtype="<i2").astype(np.float64) / 32768.0
        elif bits == 24:
            b = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
            v = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
            v = np.where(v & 0x800000, v - (1 << 24), v)
            x = v.astype(np.float64) / float(1 << 23)
        elif bits == 32:
            x = np.frombuffer(payload, dtype="<i4").astype(np.float64) / float(1 << 31)
        else:
            raise UnsupportedWavError(f"{path}: {bits}-bit integer PCM not supported")
    elif tag == _WAVE_IEEE_FLOAT:
        if bits != 32:
            raise UnsupportedWavError(f"{path}: only 32-bit float WAV is supported")
        x = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise UnsupportedWavError(f"{path}: unsupported format tag 0x{tag:04X}")

    if channels > 1:
        x = x.reshape(-1, channels).mean(axis=1)
    return AudioClip(samples=x, sample_rate=int(rate))


def read_manifest(path) -> Manifest:
    """Parse a ``path,label_1,...,label_K`` CSV manifest.

    The format is deliberately quote-free: a comma inside a path cannot be
    escaped and shows up as a row arity error.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ManifestError(f"{path}: empty manifest")

    header = lines[0].split(",")
    if len(header) < 2 or header[0] != "path":
        raise ManifestError(f"{path}: header must be path,label_1,...,label_K")
    class_names = header[1:]
    if len(set(class_names)) != len(class_names):
        raise ManifestError(f"{path}: class names must be unique")

    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ManifestError(
                f"{path}:{lineno}: expected {len(header)} cells, got {len(cells)}"
            )
        labels = []
        for cell in cells[1:]:
            if cell not in ("0", "1"):
                raise ManifestError(f"{path}:{lineno}: non-binary label {cell!r}")
            labels.append(int(cell))
        entries.append(ManifestEntry(path=cells[0], labels=tuple(labels)))
    return Manifest(entries=entries, class_names=class_names)


def write_manifest(manifest: Manifest, path) -> None:
    """Inverse of read_manifest, subject to the same no-quoting rule."""
    if len(set(manifest.class_names)) != len(manifest.class_names):
        raise ManifestError("class names must be unique")
    lines = ["path," + ",".join(manifest.class_names)]
    k = manifest.num_classes
    for entry in manifest.entries:
        if "," in entry.path or "\n" in entry.path:
            raise ManifestError(f"path {entry.path!r} contains a separator")
        if len(entry.labels) != k or any(v not in (0, 1) for v in entry.labels):
            raise ManifestError(f"labels for {entry.path!r} must be {k} binary values")
        lines.append(entry.path + "," + ",".join(str(v) for v in entry.labels))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_features(tensor: FeatureTensor, path) -> None:
    """Serialize a tensor: EDCF magic, version, u32 T, u32 F, row-major
    float32 payload, then a length-prefixed JSON metadata blob."""
    t, f = tensor.data.shape
    meta_blob = json.dumps(
        {
            "clip_id": tensor.meta.clip_id,
            "method": tensor.meta.method,
            "params": tensor.meta.params,
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(FEATURE_MAGIC)
        fh.write(bytes([FEATURE_VERSION]))
        fh.write(struct.pack("<II", t, f))
        fh.write(np.ascontiguousarray(tensor.data, dtype="<f4").tobytes())
        fh.write(struct.pack("<I", len(meta_blob)))
        fh.write(meta_blob)


def read_features(path) -> FeatureTensor:
    raw = Path(path).read_bytes()
    if len(raw) < 13:
        raise FeatureFormatError(f"{path}: truncated header")
    if raw[:4] != FEATURE_MAGIC:
        raise FeatureFormatError(f"{path}: bad magic {raw[:4]!r}")
    if raw[4] != FEATURE_VERSION:
        raise FeatureFormatError(f"{path}: unsupported version {raw[4]}")
    t, f = struct.unpack_from("<II", raw, 5)
    if t < 1 or f < 1:
        raise FeatureFormatError(f"{path}: dimensions must be >= 1, got {t}x{f}")
    data_end = 13 + t * f * 4
    if len(raw) < data_end + 4:
        raise FeatureFormatError(f"{path}: payload smaller than {t}x{f} dimensions")
    data = np.frombuffer(raw[13:data_end], dtype="<f4").reshape(t, f).copy()
    (meta_len,) = struct.unpack_from("<I", raw, data_end)
    if len(raw) != data_end + 4 + meta_len:
        raise FeatureFormatError(f"{path}: metadata length mismatch")
    try:
        meta = json.loads(raw[data_end + 4 :].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FeatureFormatError(f"{path}: bad metadata blob: {exc}") from exc
    if not isinstance(meta, dict) or not {"clip_id", "method", "params"} <= meta.keys():
        raise FeatureFormatError(f"{path}: metadata must carry clip_id/method/params")
    if not np.all(np.isfinite(data)):
        raise FeatureFormatError(f"{path}: non-finite feature values")
    return FeatureTensor(
        data=data,
        meta=FeatureMeta(
            clip_id=meta["clip_id"], method=meta["method"], params=meta["params"]
        ),
    )
