/** Error taxonomy mirrored by the CLI's exit codes. */

/** A malformed job configuration. `field` names the offending entry. Exit code 2. */
export class JobConfigError extends Error {
  constructor(
    readonly field: string,
    message: string,
  ) {
    super(`${field}: ${message}`);
    this.name = "JobConfigError";
  }
}

/**
 * An input CSV that does not match the expected schema, or carries no
 * usable data. `column` names the missing or unreadable column when one
 * is identifiable. Exit code 3.
 */
export class SchemaError extends Error {
  constructor(
    readonly file: string,
    readonly column: string | null,
    message: string,
  ) {
    super(`${file}: ${message}`);
    this.name = "SchemaError";
  }
}
