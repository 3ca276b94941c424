/** Spawns the toolkit CLI and maps its exit codes onto typed errors. */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BindingError, errorForExitCode } from "./errors.js";

/** Override with e.g. EDCKIT_CLI="python3 -m edckit" or a plain "edckit". */
export function cliCommand(): string[] {
  const override = process.env.EDCKIT_CLI;
  if (override && override.trim()) {
    return override.trim().split(/\s+/);
  }
  return ["python3", "-m", "edckit"];
}

export function runCli(args: string[]): string {
  const [command, ...prefix] = cliCommand();
  const result = spawnSync(command, [...prefix, ...args], { encoding: "utf-8" });
  if (result.error) {
    throw new BindingError(`failed to launch toolkit CLI: ${result.error.message}`);
  }
  if (result.status !== 0) {
    throw errorForExitCode(result.status ?? -1, result.stderr ?? "");
  }
  return result.stdout ?? "";
}

export function withScratchDir<T>(body: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "edckit-"));
  try {
    return body(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
