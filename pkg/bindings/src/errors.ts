/** Typed errors mirroring the toolkit CLI's exit-code taxonomy. */

export class BindingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Exit code 2: bad arguments or config values. */
export class UsageError extends BindingError {}

/** Exit code 3: I/O failure (missing file, unwritable output). */
export class IoError extends BindingError {}

/** Exit code 4: malformed or unsupported data. */
export class DataFormatError extends BindingError {}

export function errorForExitCode(code: number, stderr: string): BindingError {
  const message = stderr.trim() || `toolkit exited with code ${code}`;
  switch (code) {
    case 2:
      return new UsageError(message);
    case 3:
      return new IoError(message);
    case 4:
      return new DataFormatError(message);
    default:
      return new BindingError(message);
  }
}
