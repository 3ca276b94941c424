/** TypeScript client for the spectrogram-conditioning toolkit.
 *
 * Everything goes through the toolkit's public surfaces: the CLI and the
 * EDCF / WAV / manifest file formats.  No numeric logic is reimplemented
 * here, so binding outputs are byte-for-byte the toolkit's outputs.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { FeatureMeta, FeatureTensor, readFeatures, writeFeatures } from "./edcf.js";
import { runCli, withScratchDir } from "./runner.js";
import { writeFloat32Wav } from "./wav.js";
import { UsageError } from "./errors.js";

export { FeatureMeta, FeatureTensor, decodeFeatures, encodeFeatures, readFeatures, writeFeatures } from "./edcf.js";
export { BindingError, DataFormatError, IoError, UsageError } from "./errors.js";
export { cliCommand, runCli } from "./runner.js";
export { encodeFloat32Wav, writeFloat32Wav } from "./wav.js";

/** Mirrors the core library version. */
export const VERSION = "0.1.0";

export interface TensorInput {
  data: Float32Array;
  rows: number;
  cols: number;
  meta?: FeatureMeta;
}

export interface LogMelOptions {
  windowMs?: number;
  hopMs?: number;
  nMels?: number;
  fmin?: number;
  fmax?: number;
  logFloor?: number;
  /** "auto" (default) pads to round(duration x frame rate); "none" keeps raw frames. */
  padFrames?: "auto" | "none" | number;
}

export interface EdcOptions {
  alpha: number;
  cutoff?: number;
  rounding?: "nearest" | "floor";
}

export interface SpecAugmentOptions {
  timeMask?: { maxWidthFrames: number; numMasks?: number };
  freqMask?: { maxWidthBins: number; numMasks?: number };
  timeWarp?: { maxShiftFrames: number };
  seed?: number;
}

export type MixupOptions = { lambda: number } | { beta?: number; seed?: number };

export interface TrainingClip {
  id: string;
  samples: Float32Array;
  sampleRate: number;
  /** one 0/1 flag per class */
  labels: number[];
}

export type ConditioningMethod =
  | { method: "none" }
  | ({ method: "edc" } & EdcOptions)
  | ({ method: "specaug" } & SpecAugmentOptions)
  | { method: "mixup"; beta?: number; seed?: number };

export interface TrainingSetOptions {
  mode: "om" | "am";
  classNames: string[];
  spectrogram?: LogMelOptions;
  workers?: number;
}

export interface TrainingSetEntry {
  file: string;
  clipId: string;
  method: string;
  labels: number[];
  tensor: FeatureTensor;
}

export interface TrainingSetResult {
  entries: TrainingSetEntry[];
  summary: Record<string, unknown>;
}

function asMeta(input: TensorInput): FeatureMeta {
  return input.meta ?? { clip_id: "tensor", method: "none", params: {} };
}

function spectrogramFlags(options: LogMelOptions): string[] {
  const flags: string[] = [];
  if (options.windowMs !== undefined) flags.push("--window-ms", String(options.windowMs));
  if (options.hopMs !== undefined) flags.push("--hop-ms", String(options.hopMs));
  if (options.nMels !== undefined) flags.push("--n-mels", String(options.nMels));
  if (options.fmin !== undefined) flags.push("--fmin", String(options.fmin));
  if (options.fmax !== undefined) flags.push("--fmax", String(options.fmax));
  if (options.logFloor !== undefined) flags.push("--log-floor", String(options.logFloor));
  if (options.padFrames !== undefined) flags.push("--pad-frames", String(options.padFrames));
  return flags;
}

/** Log mel-bank energies for a mono sample buffer. */
export function logMel(
  samples: Float32Array,
  sampleRate: number,
  options: LogMelOptions = {},
): FeatureTensor {
  return withScratchDir((dir) => {
    const wav = join(dir, "clip.wav");
    const out = join(dir, "clip.edcf");
    writeFloat32Wav(wav, samples, sampleRate);
    runCli(["extract", "--in", wav, "--out", out, ...spectrogramFlags(options)]);
    return readFeatures(out);
  });
}

/** Similarity-driven local-attention conditioning of a T x F tensor. */
export function applyEdc(input: TensorInput, options: EdcOptions): FeatureTensor {
  return withScratchDir((dir) => {
    const src = join(dir, "in.edcf");
    const out = join(dir, "out.edcf");
    writeFeatures({ ...input, meta: asMeta(input) }, src);
    const flags = ["--alpha", String(options.alpha)];
    if (options.cutoff !== undefined) flags.push("--cutoff", String(options.cutoff));
    if (options.rounding !== undefined) flags.push("--rounding", options.rounding);
    runCli(["condition", "--in", src, "--method", "edc", ...flags, "--out", out]);
    return readFeatures(out);
  });
}

/** Seeded masking/warping corruption of a T x F tensor. */
export function specAugment(input: TensorInput, options: SpecAugmentOptions): FeatureTensor {
  return withScratchDir((dir) => {
    const src = join(dir, "in.edcf");
    const out = join(dir, "out.edcf");
    writeFeatures({ ...input, meta: asMeta(input) }, src);
    const flags: string[] = [];
    if (options.timeMask) {
      flags.push("--time-mask", `${options.timeMask.maxWidthFrames},${options.timeMask.numMasks ?? 1}`);
    }
    if (options.freqMask) {
      flags.push("--freq-mask", `${options.freqMask.maxWidthBins},${options.freqMask.numMasks ?? 1}`);
    }
    if (options.timeWarp) {
      flags.push("--time-warp", String(options.timeWarp.maxShiftFrames));
    }
    if (options.seed !== undefined) flags.push("--seed", String(options.seed));
    runCli(["condition", "--in", src, "--method", "specaug", ...flags, "--out", out]);
    return readFeatures(out);
  });
}

/** Convex combination of two equally shaped tensors. */
export function mixup(a: TensorInput, b: TensorInput, options: MixupOptions): FeatureTensor {
  return withScratchDir((dir) => {
    const first = join(dir, "a.edcf");
    const second = join(dir, "b.edcf");
    const out = join(dir, "mix.edcf");
    writeFeatures({ ...a, meta: asMeta(a) }, first);
    writeFeatures({ ...b, meta: asMeta(b) }, second);
    const flags: string[] = [];
    if ("lambda" in options) {
      flags.push("--lambda", String(options.lambda));
    } else {
      if (options.beta !== undefined) flags.push("--beta", String(options.beta));
      if (options.seed !== undefined) flags.push("--seed", String(options.seed));
    }
    runCli(["condition", "--in", first, "--method", "mixup", "--partner", second, ...flags, "--out", out]);
    return readFeatures(out);
  });
}

function methodFlags(method: ConditioningMethod): string[] {
  switch (method.method) {
    case "none":
      return ["--method", "none"];
    case "edc": {
      const flags = ["--method", "edc", "--alpha", String(method.alpha)];
      if (method.cutoff !== undefined) flags.push("--cutoff", String(method.cutoff));
      if (method.rounding !== undefined) flags.push("--rounding", method.rounding);
      return flags;
    }
    case "specaug": {
      const flags = ["--method", "specaug"];
      if (method.timeMask) flags.push("--time-mask", `${method.timeMask.maxWidthFrames},${method.timeMask.numMasks ?? 1}`);
      if (method.freqMask) flags.push("--freq-mask", `${method.freqMask.maxWidthBins},${method.freqMask.numMasks ?? 1}`);
      if (method.timeWarp) flags.push("--time-warp", String(method.timeWarp.maxShiftFrames));
      if (method.seed !== undefined) flags.push("--seed", String(method.seed));
      return flags;
    }
    case "mixup": {
      const flags = ["--method", "mixup"];
      if (method.beta !== undefined) flags.push("--beta", String(method.beta));
      if (method.seed !== undefined) flags.push("--seed", String(method.seed));
      return flags;
    }
  }
}

/** Original-size or augmented-mode training set from raw clips. */
export function buildTrainingSet(
  clips: TrainingClip[],
  method: ConditioningMethod,
  options: TrainingSetOptions,
): TrainingSetResult {
  if (clips.length === 0) {
    throw new UsageError("clip list is empty");
  }
  const k = options.classNames.length;
  if (k < 1) {
    throw new UsageError("classNames must name at least one class");
  }
  for (const clip of clips) {
    if (clip.labels.length !== k) {
      throw new UsageError(`clip ${clip.id}: expected ${k} labels, got ${clip.labels.length}`);
    }
  }
  return withScratchDir((dir) => {
    const rows = ["path," + options.classNames.join(",")];
    for (const clip of clips) {
      const name = `${clip.id}.wav`;
      writeFloat32Wav(join(dir, name), clip.samples, clip.sampleRate);
      rows.push(`${name},${clip.labels.join(",")}`);
    }
    const manifest = join(dir, "manifest.csv");
    writeFileSync(manifest, rows.join("\n") + "\n");

    const outDir = join(dir, "features");
    const args = [
      "batch",
      "--manifest",
      manifest,
      "--out-dir",
      outDir,
      "--mode",
      options.mode,
      ...methodFlags(method),
      ...spectrogramFlags(options.spectrogram ?? {}),
    ];
    if (options.workers !== undefined) args.push("--workers", String(options.workers));
    runCli(args);

    const summary = JSON.parse(readFileSync(join(outDir, "summary.json"), "utf-8"));
    const entries: TrainingSetEntry[] = summary.outputs.map(
      (record: { file: string; clip_id: string; method: string; labels: number[] }) => ({
        file: record.file,
        clipId: record.clip_id,
        method: record.method,
        labels: record.labels,
        tensor: readFeatures(join(outDir, record.file)),
      }),
    );
    return { entries, summary };
  });
}

/** Version string reported by the toolkit CLI itself. */
export function toolkitVersion(): string {
  return runCli(["--version"]).trim().split(/\s+/).pop() ?? "";
}
