/** Reader/writer for the EDCF feature-file layout.
 *
 * magic "EDCF" | version 0x01 | u32le T | u32le F |
 * T*F little-endian float32 row-major | u32le meta length | UTF-8 JSON meta
 */

import { readFileSync, writeFileSync } from "node:fs";

import { DataFormatError } from "./errors.js";

const MAGIC = Buffer.from("EDCF", "ascii");
const VERSION = 1;
const HEADER_BYTES = 13;

export interface FeatureMeta {
  clip_id: string;
  method: string;
  params: Record<string, unknown>;
}

export interface FeatureTensor {
  /** row-major (time-major) T*F payload */
  data: Float32Array;
  rows: number;
  cols: number;
  meta: FeatureMeta;
}

export function encodeFeatures(tensor: FeatureTensor): Buffer {
  const { data, rows, cols, meta } = tensor;
  if (rows < 1 || cols < 1 || data.length !== rows * cols) {
    throw new DataFormatError(`tensor shape ${rows}x${cols} does not match ${data.length} values`);
  }
  const metaBlob = Buffer.from(JSON.stringify(meta), "utf-8");
  const out = Buffer.alloc(HEADER_BYTES + data.length * 4 + 4 + metaBlob.length);
  MAGIC.copy(out, 0);
  out.writeUInt8(VERSION, 4);
  out.writeUInt32LE(rows, 5);
  out.writeUInt32LE(cols, 9);
  for (let i = 0; i < data.length; i++) {
    out.writeFloatLE(data[i], HEADER_BYTES + i * 4);
  }
  out.writeUInt32LE(metaBlob.length, HEADER_BYTES + data.length * 4);
  metaBlob.copy(out, HEADER_BYTES + data.length * 4 + 4);
  return out;
}

export function decodeFeatures(raw: Buffer): FeatureTensor {
  if (raw.length < HEADER_BYTES) {
    throw new DataFormatError("truncated header");
  }
  if (!raw.subarray(0, 4).equals(MAGIC)) {
    throw new DataFormatError(`bad magic ${JSON.stringify(raw.subarray(0, 4).toString("latin1"))}`);
  }
  if (raw.readUInt8(4) !== VERSION) {
    throw new DataFormatError(`unsupported version ${raw.readUInt8(4)}`);
  }
  const rows = raw.readUInt32LE(5);
  const cols = raw.readUInt32LE(9);
  if (rows < 1 || cols < 1) {
    throw new DataFormatError(`dimensions must be >= 1, got ${rows}x${cols}`);
  }
  const dataEnd = HEADER_BYTES + rows * cols * 4;
  if (raw.length < dataEnd + 4) {
    throw new DataFormatError(`payload smaller than ${rows}x${cols} dimensions`);
  }
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = raw.readFloatLE(HEADER_BYTES + i * 4);
  }
  const metaLen = raw.readUInt32LE(dataEnd);
  if (raw.length !== dataEnd + 4 + metaLen) {
    throw new DataFormatError("metadata length mismatch");
  }
  let meta: FeatureMeta;
  try {
    meta = JSON.parse(raw.subarray(dataEnd + 4).toString("utf-8"));
  } catch (err) {
    throw new DataFormatError(`bad metadata blob: ${String(err)}`);
  }
  if (
    typeof meta !== "object" ||
    meta === null ||
    !("clip_id" in meta) ||
    !("method" in meta) ||
    !("params" in meta)
  ) {
    throw new DataFormatError("metadata must carry clip_id/method/params");
  }
  return { data, rows, cols, meta };
}

export function readFeatures(path: string): FeatureTensor {
  return decodeFeatures(readFileSync(path));
}

export function writeFeatures(tensor: FeatureTensor, path: string): void {
  writeFileSync(path, encodeFeatures(tensor));
}
