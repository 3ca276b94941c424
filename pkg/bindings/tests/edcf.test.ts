import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { DataFormatError } from "../src/errors.js";
import { decodeFeatures, encodeFeatures, readFeatures, writeFeatures } from "../src/edcf.js";

const dir = mkdtempSync(join(tmpdir(), "edcf-test-"));
afterAll(() => rmSync(dir, { recursive: true, force: true }));

function randomTensor(seedIndex: number) {
  const rows = 1 + ((seedIndex * 7) % 30);
  const cols = 1 + ((seedIndex * 13) % 20);
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = Math.fround(Math.sin(seedIndex * 1000 + i) * 10);
  }
  return {
    data,
    rows,
    cols,
    meta: { clip_id: `clip${seedIndex}`, method: "none", params: { i: seedIndex } },
  };
}

describe("EDCF container", () => {
  it("round-trips tensors byte-for-byte", () => {
    for (let trial = 0; trial < 10; trial++) {
      const tensor = randomTensor(trial);
      const encoded = encodeFeatures(tensor);
      const back = decodeFeatures(encoded);
      expect(back.rows).toBe(tensor.rows);
      expect(back.cols).toBe(tensor.cols);
      expect(Buffer.from(back.data.buffer).equals(Buffer.from(tensor.data.buffer))).toBe(true);
      expect(back.meta).toEqual(tensor.meta);
      expect(encodeFeatures(back).equals(encoded)).toBe(true);
    }
  });

  it("round-trips through the filesystem", () => {
    const tensor = randomTensor(3);
    const path = join(dir, "t.edcf");
    writeFeatures(tensor, path);
    const back = readFeatures(path);
    expect(Buffer.from(back.data.buffer).equals(Buffer.from(tensor.data.buffer))).toBe(true);
  });

  it("rejects a bad magic", () => {
    const path = join(dir, "bad.edcf");
    writeFileSync(path, Buffer.from("NOPE\x01rubbish-here-rubbish"));
    expect(() => readFeatures(path)).toThrow(DataFormatError);
  });

  it("rejects truncated payloads", () => {
    const encoded = encodeFeatures(randomTensor(4));
    expect(() => decodeFeatures(encoded.subarray(0, encoded.length - 6))).toThrow(DataFormatError);
  });

  it("rejects a shape/payload mismatch on encode", () => {
    expect(() =>
      encodeFeatures({
        data: new Float32Array(5),
        rows: 2,
        cols: 3,
        meta: { clip_id: "x", method: "none", params: {} },
      }),
    ).toThrow(DataFormatError);
  });
});
