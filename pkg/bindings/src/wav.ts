/** Minimal IEEE-float32 WAV writer for handing sample buffers to the toolkit. */

import { writeFileSync } from "node:fs";

export function encodeFloat32Wav(samples: Float32Array, sampleRate: number): Buffer {
  const payload = Buffer.alloc(samples.length * 4);
  for (let i = 0; i < samples.length; i++) {
    payload.writeFloatLE(samples[i], i * 4);
  }
  const fmt = Buffer.alloc(16);
  fmt.writeUInt16LE(3, 0); // IEEE float
  fmt.writeUInt16LE(1, 2); // mono
  fmt.writeUInt32LE(sampleRate, 4);
  fmt.writeUInt32LE(sampleRate * 4, 8);
  fmt.writeUInt16LE(4, 12);
  fmt.writeUInt16LE(32, 14);

  const chunks = Buffer.concat([
    Buffer.from("fmt ", "ascii"),
    uint32(fmt.length),
    fmt,
    Buffer.from("data", "ascii"),
    uint32(payload.length),
    payload,
  ]);
  return Buffer.concat([Buffer.from("RIFF", "ascii"), uint32(4 + chunks.length), Buffer.from("WAVE", "ascii"), chunks]);
}

export function writeFloat32Wav(path: string, samples: Float32Array, sampleRate: number): void {
  writeFileSync(path, encodeFloat32Wav(samples, sampleRate));
}

function uint32(value: number): Buffer {
  const out = Buffer.alloc(4);
  out.writeUInt32LE(value, 0);
  return out;
}
