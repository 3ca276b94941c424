/** The CLI's exit-code taxonomy must surface as the matching typed errors. */

import { describe, expect, it } from "vitest";

import { DataFormatError, IoError, UsageError } from "../src/errors.js";
import { applyEdc, logMel, mixup, runCli } from "../src/index.js";

const tensor = (rows: number, cols: number) => ({
  data: new Float32Array(rows * cols).fill(1),
  rows,
  cols,
});

describe("error taxonomy", () => {
  it("maps exit 2 (bad arguments) to UsageError", () => {
    expect(() => applyEdc(tensor(4, 4), { alpha: 0 })).toThrow(UsageError);
    expect(() => applyEdc(tensor(4, 4), { alpha: 0 })).toThrow(/alpha must be positive/);
  }, 30000);

  it("maps exit 3 (I/O failure) to IoError", () => {
    expect(() => runCli(["plot", "--in", "/nonexistent/x.edcf", "--out", "/tmp/out.pgm"])).toThrow(
      IoError,
    );
  }, 30000);

  it("maps exit 4 (malformed data) to DataFormatError", () => {
    // a WAV that is not RIFF at all
    expect(() => runCli(["extract", "--in", "/etc/hostname", "--out", "/tmp/x.edcf"])).toThrow(
      DataFormatError,
    );
  }, 30000);

  it("rejects mixup shape mismatches as UsageError", () => {
    expect(() => mixup(tensor(4, 4), tensor(5, 4), { lambda: 0.5 })).toThrow(UsageError);
  }, 30000);

  it("rejects clips shorter than one window as DataFormatError", () => {
    expect(() => logMel(new Float32Array(100), 16000)).toThrow(DataFormatError);
  }, 30000);
});
