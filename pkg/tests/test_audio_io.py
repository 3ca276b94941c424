import numpy as np
import pytest

from edckit.audio_io import (
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
from edckit.errors import (
    FeatureFormatError,
    MalformedWavError,
    ManifestError,
    UnsupportedWavError,
)
from wavgen import write_wav


# --- WAV decoding -------------------------------------------------------


def test_silence_wav(tmp_path):
    path = tmp_path / "silence.wav"
    write_wav(path, np.zeros(16000), 16000)
    clip = load_wav(path)
    assert clip.sample_rate == 16000
    assert clip.samples.shape == (16000,)
    assert np.all(clip.samples == 0.0)


def test_stereo_average_cancels(tmp_path):
    path = tmp_path / "stereo.wav"
    data = np.column_stack([np.full(1000, 0.5), np.full(1000, -0.5)])
    write_wav(path, data, 8000)
    clip = load_wav(path)
    assert clip.samples.shape == (1000,)
    assert np.all(clip.samples == 0.0)


def test_duration_from_sample_count(tmp_path):
    path = tmp_path / "ten.wav"
    write_wav(path, np.zeros(160000), 16000)
    clip = load_wav(path)
    assert clip.samples.size == 160000
    assert clip.duration == 10.0


@pytest.mark.parametrize("encoding", ["pcm8", "pcm16", "pcm24", "pcm32"])
def test_integer_pcm_never_exceeds_unit(tmp_path, encoding):
    rng = np.random.default_rng(42)
    data = np.clip(rng.uniform(-1.2, 1.2, 500), -1.0, 1.0)
    path = tmp_path / f"{encoding}.wav"
    write_wav(path, data, 8000, encoding=encoding)
    clip = load_wav(path)
    assert np.all(np.abs(clip.samples) <= 1.0)


def test_pcm16_fullscale_values(tmp_path):
    path = tmp_path / "fs.wav"
    write_wav(path, np.array([-1.0, 0.5, 0.0]), 8000, encoding="pcm16")
    clip = load_wav(path)
    np.testing.assert_array_equal(clip.samples, [-1.0, 0.5, 0.0])


def test_pcm24_scaling(tmp_path):
    path = tmp_path / "p24.wav"
    write_wav(path, np.array([0.25, -0.25, 1.0]), 8000, encoding="pcm24")
    clip = load_wav(path)
    np.testing.assert_allclose(clip.samples[:2], [0.25, -0.25], atol=2**-23)
    assert clip.samples[2] == ((1 << 23) - 1) / (1 << 23)


def test_float32_passthrough(tmp_path):
    rng = np.random.default_rng(7)
    data = rng.uniform(-1, 1, 300)
    path = tmp_path / "f32.wav"
    write_wav(path, data, 22050, encoding="float32")
    clip = load_wav(path)
    np.testing.assert_array_equal(clip.samples, data.astype(np.float32).astype(np.float64))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_wav(tmp_path / "nope.wav")


def test_not_riff(tmp_path):
    path = tmp_path / "junk.wav"
    path.write_bytes(b"\x00" * 64)
    with pytest.raises(MalformedWavError):
        load_wav(path)


def test_truncated_chunk(tmp_path):
    good = tmp_path / "good.wav"
    write_wav(good, np.zeros(100), 8000)
    bad = tmp_path / "bad.wav"
    bad.write_bytes(good.read_bytes()[:50])
    with pytest.raises(MalformedWavError):
        load_wav(bad)


def test_unsupported_float64(tmp_path):
    import struct

    fmt = struct.pack("<HHIIHH", 3, 1, 8000, 8000 * 8, 8, 64)
    payload = np.zeros(10, dtype="<f8").tobytes()
    body = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    path = tmp_path / "f64.wav"
    path.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(body)) + b"WAVE" + body)
    with pytest.raises(UnsupportedWavError):
        load_wav(path)


def test_unsupported_codec(tmp_path):
    import struct

    fmt = struct.pack("<HHIIHH", 6, 1, 8000, 8000, 1, 8)  # a-law
    body = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", 4) + b"\x00\x00\x00\x00"
    path = tmp_path / "alaw.wav"
    path.write_bytes(b"RIFF" + struct.pack("<I", 4 + len(body)) + b"WAVE" + body)
    with pytest.raises(UnsupportedWavError):
        load_wav(path)


# --- manifests ----------------------------------------------------------


def test_manifest_parse(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("path,label_1,label_2,label_3\na.wav,1,0,1\n")
    manifest = read_manifest(path)
    assert manifest.class_names == ["label_1", "label_2", "label_3"]
    assert manifest.entries == [ManifestEntry("a.wav", (1, 0, 1))]


def test_manifest_non_binary_label(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("path,a,b\nx.wav,2,0\n")
    with pytest.raises(ManifestError, match="non-binary"):
        read_manifest(path)


def test_manifest_arity_mismatch(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("path,a,b\nx,y.wav,1,0\n")
    with pytest.raises(ManifestError, match="cells"):
        read_manifest(path)


def test_manifest_empty_file(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("")
    with pytest.raises(ManifestError, match="empty"):
        read_manifest(path)


def test_manifest_bad_header(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("file,a\nx.wav,1\n")
    with pytest.raises(ManifestError, match="header"):
        read_manifest(path)


def test_manifest_duplicate_classes(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("path,a,a\nx.wav,1,0\n")
    with pytest.raises(ManifestError, match="unique"):
        read_manifest(path)


def test_manifest_ten_classes(tmp_path):
    names = [f"label_{i}" for i in range(1, 11)]
    path = tmp_path / "m.csv"
    path.write_text("path," + ",".join(names) + "\nclip.wav," + ",".join("1" if i % 2 else "0" for i in range(10)) + "\n")
    manifest = read_manifest(path)
    assert manifest.num_classes == 10
    assert len(manifest.entries[0].labels) == 10


def test_manifest_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    for trial in range(10):
        k = int(rng.integers(1, 8))
        names = [f"cls{i}" for i in range(k)]
        entries = [
            ManifestEntry(f"clip_{i}.wav", tuple(int(v) for v in rng.integers(0, 2, k)))
            for i in range(int(rng.integers(1, 6)))
        ]
        manifest = Manifest(entries=entries, class_names=names)
        path = tmp_path / f"m{trial}.csv"
        write_manifest(manifest, path)
        assert read_manifest(path) == manifest


# --- feature tensors ----------------------------------------------------


def test_feature_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(11)
    for trial in range(20):
        t = int(rng.integers(1, 40))
        f = int(rng.integers(1, 80))
        data = rng.normal(0, 10, (t, f)).astype(np.float32)
        meta = FeatureMeta(clip_id=f"clip{trial}", method="none", params={"n": trial, "x": [1, 2]})
        path = tmp_path / f"t{trial}.edcf"
        write_features(FeatureTensor(data=data, meta=meta), path)
        back = read_features(path)
        assert np.array_equal(back.data, data)
        assert back.data.dtype == np.float32
        assert back.meta == meta


def test_feature_chime_shape_preserved(tmp_path):
    data = np.random.default_rng(0).normal(size=(200, 64)).astype(np.float32)
    path = tmp_path / "c.edcf"
    write_features(FeatureTensor(data=data, meta=FeatureMeta("c", "none", {})), path)
    back = read_features(path)
    assert back.data.shape == (200, 64)


def test_feature_bad_magic(tmp_path):
    path = tmp_path / "bad.edcf"
    path.write_bytes(b"NOPE" + b"\x01" + b"\x00" * 30)
    with pytest.raises(FeatureFormatError, match="magic"):
        read_features(path)


def test_feature_bad_version(tmp_path):
    good = tmp_path / "good.edcf"
    write_features(
        FeatureTensor(np.ones((2, 2), np.float32), FeatureMeta("x", "none", {})), good
    )
    raw = bytearray(good.read_bytes())
    raw[4] = 9
    bad = tmp_path / "bad.edcf"
    bad.write_bytes(bytes(raw))
    with pytest.raises(FeatureFormatError, match="version"):
        read_features(bad)


def test_feature_size_mismatch(tmp_path):
    good = tmp_path / "good.edcf"
    write_features(
        FeatureTensor(np.ones((4, 4), np.float32), FeatureMeta("x", "none", {})), good
    )
    raw = good.read_bytes()
    bad = tmp_path / "bad.edcf"
    bad.write_bytes(raw[:-10])
    with pytest.raises(FeatureFormatError):
        read_features(bad)


def test_feature_rejects_non_finite():
    data = np.ones((2, 2), np.float32)
    data[0, 0] = np.nan
    with pytest.raises(ValueError, match="finite"):
        FeatureTensor(data=data, meta=FeatureMeta("x", "none", {}))
