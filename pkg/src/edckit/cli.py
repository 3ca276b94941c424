"""Command-line front end: extract, condition, batch, ranges, plot.

Exit codes: 0 success, 2 bad arguments, 3 I/O failure, 4 malformed data.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, augment
from .audio_io import FeatureMeta, FeatureTensor, load_wav, read_features, read_manifest, write_features
from .edc import AttenuationConfig, apply_edc, max_reach_table
from .errors import EdckitError
from .features import SpectrogramConfig, log_mel
from .pipeline import (
    DatasetMode,
    EdcConditioning,
    MixupConditioning,
    NoConditioning,
    SpecAugmentConditioning,
    pad_to_frames,
    process_manifest,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4

_METHOD_TAGS = {"none": "none", "edc": "edc", "specaug": "specaugment", "mixup": "mixup"}


def _default_seed() -> int:
    return int(os.environ.get("EDC_SEED", "0"))


def _spectrogram_flags(sub):
    sub.add_argument("--window-ms", type=float, default=40.0)
    sub.add_argument("--hop-ms", type=float, default=20.0)
    sub.add_argument("--n-mels", type=int, default=64)
    sub.add_argument("--fmin", type=float, default=0.0)
    sub.add_argument("--fmax", type=float, default=None)
    sub.add_argument("--log-floor", type=float, default=1e-10)
    sub.add_argument(
        "--pad-frames",
        default="auto",
        help="'auto' pads to round(duration x frame rate), 'none' keeps raw frames, or an integer",
    )


def _spectrogram_config(args) -> SpectrogramConfig:
    return SpectrogramConfig(
        window_ms=args.window_ms,
        hop_ms=args.hop_ms,
        n_mels=args.n_mels,
        fmin=args.fmin,
        fmax=args.fmax,
        log_floor=args.log_floor,
    )


def _target_frames(pad_frames: str, clip, config: SpectrogramConfig) -> int | None:
    if pad_frames == "none":
        return None
    if pad_frames == "auto":
        return int(round(clip.samples.size / config.hop_samples(clip.sample_rate)))
    try:
        return int(pad_frames)
    except ValueError:
        raise ValueError(f"--pad-frames must be 'auto', 'none', or an integer, got {pad_frames!r}")


def _method_flags(sub):
    sub.add_argument("--alpha", type=float, help="attenuation time constant (edc)")
    sub.add_argument("--cutoff", type=float, default=0.02)
    sub.add_argument("--rounding", choices=("nearest", "floor"), default="nearest")
    sub.add_argument("--time-mask", metavar="WIDTH,COUNT", help="specaug time masking")
    sub.add_argument("--freq-mask", metavar="WIDTH,COUNT", help="specaug frequency masking")
    sub.add_argument("--time-warp", type=int, metavar="SHIFT", help="specaug warp shift")
    sub.add_argument("--seed", type=int, default=None, help="defaults to $EDC_SEED or 0")
    sub.add_argument("--beta", type=float, default=0.2, help="mixup Beta(beta, beta)")


def _parse_mask(text: str, what: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--{what} expects WIDTH,COUNT, got {text!r}")
    return int(parts[0]), int(parts[1])


def _specaugment_config(args) -> augment.SpecAugmentConfig:
    time_mask = freq_mask = time_warp = None
    if args.time_mask:
        width, count = _parse_mask(args.time_mask, "time-mask")
        time_mask = augment.TimeMask(max_width_frames=width, num_masks=count)
    if args.freq_mask:
        width, count = _parse_mask(args.freq_mask, "freq-mask")
        freq_mask = augment.FreqMask(max_width_bins=width, num_masks=count)
    if args.time_warp:
        time_warp = augment.TimeWarp(max_shift_frames=args.time_warp)
    seed = args.seed if args.seed is not None else _default_seed()
    return augment.SpecAugmentConfig(
        time_mask=time_mask, freq_mask=freq_mask, time_warp=time_warp, seed=seed
    )


def cmd_extract(args) -> int:
    clip = load_wav(args.input)
    config = _spectrogram_config(args)
    spec = log_mel(clip, config)
    target = _target_frames(args.pad_frames, clip, config)
    if target is not None:
        spec = pad_to_frames(spec, target)
    tensor = FeatureTensor(
        data=spec.frames.astype(np.float32),
        meta=FeatureMeta(
            clip_id=Path(args.input).stem,
            method="none",
            params={"spectrogram": asdict(config)},
        ),
    )
    write_features(tensor, args.output)
    return EXIT_OK


def cmd_condition(args) -> int:
    tensor = read_features(args.input)
    frames = tensor.data.astype(np.float64)

    if args.method == "edc":
        if args.alpha is None:
            raise ValueError("--method edc requires --alpha")
        config = AttenuationConfig(alpha=args.alpha, cutoff=args.cutoff, rounding=args.rounding)
        out = apply_edc(frames, config)
        params = {"alpha": config.alpha, "cutoff": config.cutoff, "rounding": config.rounding}
    elif args.method == "specaug":
        config = _specaugment_config(args)
        plan = augment.draw_plan(config, frames.shape)
        out = augment.apply_plan(frames, plan)
        params = {"seed": config.seed, "draws": plan.to_params()}
    else:  # mixup
        if not args.partner:
            raise ValueError("--method mixup requires --partner")
        partner = read_features(args.partner)
        if args.lam is not None:
            lam = args.lam
        else:
            seed = args.seed if args.seed is not None else _default_seed()
            lam = augment.draw_mixup_lambda(args.beta, np.random.default_rng(seed))
        empty = np.zeros(0)
        out, _ = augment.mixup(frames, empty, partner.data.astype(np.float64), empty, lam)
        params = {"lambda": lam, "partner": partner.meta.clip_id}

    result = FeatureTensor(
        data=out.astype(np.float32),
        meta=FeatureMeta(
            clip_id=tensor.meta.clip_id, method=_METHOD_TAGS[args.method], params=params
        ),
    )
    write_features(result, args.output)
    return EXIT_OK


def cmd_batch(args) -> int:
    manifest = read_manifest(args.manifest)
    config = _spectrogram_config(args)

    seed = args.seed if args.seed is not None else _default_seed()
    if args.method == "none":
        method = NoConditioning()
    elif args.method == "edc":
        if args.alpha is None:
            raise ValueError("--method edc requires --alpha")
        method = EdcConditioning(
            AttenuationConfig(alpha=args.alpha, cutoff=args.cutoff, rounding=args.rounding)
        )
    elif args.method == "specaug":
        method = SpecAugmentConditioning(_specaugment_config(args))
    else:
        method = MixupConditioning(beta=args.beta, seed=seed)

    if args.pad_frames == "auto":
        target = None
    else:
        try:
            target = int(args.pad_frames)
        except ValueError:
            raise ValueError("batch always pads; --pad-frames must be 'auto' or an integer")
    summary = process_manifest(
        manifest,
        config,
        method,
        DatasetMode(args.mode),
        args.out_dir,
        target_frames=target,
        workers=args.workers,
        base_dir=Path(args.manifest).parent,
    )
    counts = summary["counts"]
    print(
        f"{counts['outputs']} feature files from {counts['entries']} entries "
        f"({counts['failures']} failures) -> {args.out_dir}"
    )
    return EXIT_OK


def cmd_ranges(args) -> int:
    alphas = [float(a) for a in args.alphas.split(",") if a]
    if not alphas:
        raise ValueError("--alphas must list at least one value")
    for alpha, total in max_reach_table(alphas, cutoff=args.cutoff):
        if args.frames is not None and total > args.frames:
            print(
                f"{alpha:g}\t{args.frames}\t# clamped: {total}-frame window exceeds the "
                f"{args.frames}-frame clip, attention is effectively global"
            )
        else:
            print(f"{alpha:g}\t{total}")
    return EXIT_OK


def _to_pixels(data: np.ndarray) -> np.ndarray:
    """Min-max normalize to u8, time horizontal, low mel bands at the bottom."""
    lo, hi = float(data.min()), float(data.max())
    if hi <= lo:
        return np.full((data.shape[1], data.shape[0]), 128, dtype=np.uint8)
    scaled = np.round((data - lo) / (hi - lo) * 255.0).astype(np.uint8)
    return scaled.T[::-1]


def cmd_plot(args) -> int:
    image = _to_pixels(read_features(args.input).data)
    if args.compare:
        other = _to_pixels(read_features(args.compare).data)
        height = max(image.shape[0], other.shape[0])

        def grow(img):
            if img.shape[0] == height:
                return img
            pad = np.zeros((height - img.shape[0], img.shape[1]), dtype=np.uint8)
            return np.vstack([img, pad])

        gap = np.full((height, 4), 255, dtype=np.uint8)
        image = np.hstack([grow(image), gap, grow(other)])

    out = Path(args.output)
    if out.suffix.lower() == ".png":
        from PIL import Image

        Image.fromarray(image, mode="L").save(out)
    else:
        height, width = image.shape
        with open(out, "wb") as fh:
            fh.write(b"P5\n%d %d\n255\n" % (width, height))
            fh.write(image.tobytes())
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edckit",
        description="Deterministic spectrogram conditioning toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("extract", help="WAV -> log-mel feature file")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", dest="output", required=True)
    _spectrogram_flags(sub)
    sub.set_defaults(func=cmd_extract)

    sub = commands.add_parser("condition", help="apply a conditioner to a feature file")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--out", dest="output", required=True)
    sub.add_argument("--method", choices=("edc", "specaug", "mixup"), required=True)
    sub.add_argument("--partner", help="second feature file (mixup)")
    sub.add_argument("--lambda", dest="lam", type=float, help="explicit mixing weight")
    _method_flags(sub)
    sub.set_defaults(func=cmd_condition)

    sub = commands.add_parser("batch", help="process a manifest into a training set")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--out-dir", required=True)
    sub.add_argument("--method", choices=tuple(_METHOD_TAGS), default="none")
    sub.add_argument("--mode", choices=("om", "am"), default="om")
    sub.add_argument("--workers", type=int, default=4)
    _spectrogram_flags(sub)
    _method_flags(sub)
    sub.set_defaults(func=cmd_batch)

    sub = commands.add_parser("ranges", help="selectable window per attenuation factor")
    sub.add_argument("--alphas", required=True, help="comma-separated list")
    sub.add_argument("--cutoff", type=float, default=0.02)
    sub.add_argument("--frames", type=int, default=None, help="clamp to clip length")
    sub.set_defaults(func=cmd_ranges)

    sub = commands.add_parser("plot", help="render feature files as grayscale heatmaps")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--compare", default=None)
    sub.add_argument("--out", dest="output", required=True)
    sub.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EdckitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
