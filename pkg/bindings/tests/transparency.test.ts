/** Boundary transparency: binding outputs must be bit-identical to what the
 * core library produces on the same inputs.  References are generated by a
 * Python script that calls the library directly (not through the CLI the
 * bindings use), over 50 random inputs total.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readdirSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { readFeatures, writeFeatures } from "../src/edcf.js";
import { applyEdc, logMel } from "../src/index.js";
import { writeFloat32Wav } from "../src/wav.js";

const dir = mkdtempSync(join(tmpdir(), "edckit-transparency-"));
afterAll(() => rmSync(dir, { recursive: true, force: true }));

const EDC_CASES = 30;
const LOGMEL_CASES = 20;
const ALPHAS = [0.5, 2, 7, 10];

// deterministic pseudo-random floats so both sides see identical bytes
function mulberry32(seed: number) {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function runPythonReference(script: string): void {
  const result = spawnSync("python3", ["-c", script], { encoding: "utf-8" });
  if (result.status !== 0) {
    throw new Error(`reference generation failed: ${result.stderr}`);
  }
}

describe("binding transparency", () => {
  it(
    "applyEdc matches the core library bit-for-bit on random tensors",
    () => {
      const inputs: { rows: number; cols: number; alpha: number }[] = [];
      for (let i = 0; i < EDC_CASES; i++) {
        const rand = mulberry32(9000 + i);
        const rows = 1 + Math.floor(rand() * 24);
        const cols = 1 + Math.floor(rand() * 12);
        const alpha = ALPHAS[i % ALPHAS.length];
        const data = new Float32Array(rows * cols);
        for (let k = 0; k < data.length; k++) {
          data[k] = Math.fround((rand() - 0.5) * 6);
        }
        writeFeatures(
          { data, rows, cols, meta: { clip_id: `case${i}`, method: "none", params: {} } },
          join(dir, `edc_in_${i}.edcf`),
        );
        inputs.push({ rows, cols, alpha });
      }

      // one python invocation produces every reference via the library API
      runPythonReference(
        `
import numpy as np
from edckit import AttenuationConfig, apply_edc, read_features, write_features
from edckit.audio_io import FeatureMeta, FeatureTensor
import json, sys
base = ${JSON.stringify(dir)}
alphas = json.loads(${JSON.stringify(JSON.stringify(inputs.map((c) => c.alpha)))})
for i, alpha in enumerate(alphas):
    tensor = read_features(f"{base}/edc_in_{i}.edcf")
    out = apply_edc(tensor.data.astype(np.float64), AttenuationConfig(alpha=float(alpha)))
    write_features(
        FeatureTensor(out.astype(np.float32), FeatureMeta("ref", "edc", {})),
        f"{base}/edc_ref_{i}.edcf",
    )
`,
      );

      for (let i = 0; i < EDC_CASES; i++) {
        const input = readFeatures(join(dir, `edc_in_${i}.edcf`));
        const got = applyEdc(input, { alpha: inputs[i].alpha });
        const want = readFeatures(join(dir, `edc_ref_${i}.edcf`));
        expect(got.rows).toBe(want.rows);
        expect(got.cols).toBe(want.cols);
        expect(Buffer.from(got.data.buffer).equals(Buffer.from(want.data.buffer))).toBe(true);
        expect(got.meta.method).toBe("edc");
        expect(got.meta.params.alpha).toBe(inputs[i].alpha);
      }
    },
    120000,
  );

  it(
    "logMel matches the core library bit-for-bit on random signals",
    () => {
      const rates = [8000, 16000];
      for (let i = 0; i < LOGMEL_CASES; i++) {
        const rand = mulberry32(500 + i);
        const rate = rates[i % rates.length];
        const samples = new Float32Array(Math.floor(rate * (0.5 + rand())));
        for (let k = 0; k < samples.length; k++) {
          samples[k] = Math.fround((rand() - 0.5) * 0.8);
        }
        writeFloat32Wav(join(dir, `lm_in_${i}.wav`), samples, rate);
      }

      runPythonReference(
        `
import numpy as np
from edckit import SpectrogramConfig, load_wav, log_mel, pad_to_frames, write_features
from edckit.audio_io import FeatureMeta, FeatureTensor
base = ${JSON.stringify(dir)}
config = SpectrogramConfig()
for i in range(${LOGMEL_CASES}):
    clip = load_wav(f"{base}/lm_in_{i}.wav")
    spec = log_mel(clip, config)
    target = int(round(clip.samples.size / config.hop_samples(clip.sample_rate)))
    spec = pad_to_frames(spec, target)
    write_features(
        FeatureTensor(spec.frames.astype(np.float32), FeatureMeta("ref", "none", {})),
        f"{base}/lm_ref_{i}.edcf",
    )
`,
      );

      for (let i = 0; i < LOGMEL_CASES; i++) {
        const rate = rates[i % rates.length];
        const rand = mulberry32(500 + i);
        const samples = new Float32Array(Math.floor(rate * (0.5 + rand())));
        for (let k = 0; k < samples.length; k++) {
          samples[k] = Math.fround((rand() - 0.5) * 0.8);
        }
        const got = logMel(samples, rate);
        const want = readFeatures(join(dir, `lm_ref_${i}.edcf`));
        expect([got.rows, got.cols]).toEqual([want.rows, want.cols]);
        expect(got.cols).toBe(64);
        expect(Buffer.from(got.data.buffer).equals(Buffer.from(want.data.buffer))).toBe(true);
      }
    },
    120000,
  );

  it("scratch files do not leak and config echoes into metadata", () => {
    const before = readdirSync(tmpdir()).filter((name) => name.startsWith("edckit-")).length;
    const spec = logMel(new Float32Array(8000), 8000, { windowMs: 25, nMels: 32 });
    const after = readdirSync(tmpdir()).filter((name) => name.startsWith("edckit-")).length;
    expect(after).toBe(before);
    expect(spec.cols).toBe(32);
    const params = spec.meta.params as { spectrogram: { window_ms: number; n_mels: number } };
    expect(params.spectrogram.window_ms).toBe(25);
    expect(params.spectrogram.n_mels).toBe(32);
  });
});
