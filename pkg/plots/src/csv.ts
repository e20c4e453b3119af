/**
 * Strict readers for the two CSV contracts written by the voxpop CLI.
 *
 * trajectories.csv: mechanism,replication,t,k,p
 * errors.csv:       metric,mechanism,N,M,T,estimate,std_error,bound,replications
 *
 * A missing column or an unparsable cell raises SchemaError naming the
 * column, so callers can surface exactly what the producer left out.
 */

import Papa from "papaparse";

import { SchemaError } from "./errors.js";

export interface TrajectoryRow {
  mechanism: string;
  replication: number;
  t: number;
  k: number;
  p: number;
}

export interface ErrorReportRow {
  metric: string;
  mechanism: string;
  n: number;
  /** Survey size; null for census/recursion regimes (empty cell). */
  m: number | null;
  t: number;
  estimate: number;
  stdError: number;
  bound: number;
  replications: number;
}

export const TRAJECTORY_COLUMNS = ["mechanism", "replication", "t", "k", "p"] as const;
export const ERROR_COLUMNS = [
  "metric", "mechanism", "N", "M", "T",
  "estimate", "std_error", "bound", "replications",
] as const;

type RawRow = Record<string, string>;

function parseRows(file: string, text: string, required: readonly string[]): RawRow[] {
  const parsed = Papa.parse<RawRow>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of required) {
    if (!fields.includes(column)) {
      throw new SchemaError(file, column, `missing column "${column}"`);
    }
  }
  const fatal = parsed.errors.find((e) => e.code !== "TooFewFields" && e.code !== "TooManyFields");
  if (fatal !== undefined) {
    throw new SchemaError(file, null, `unreadable CSV: ${fatal.message}`);
  }
  return parsed.data;
}

function toNumber(file: string, column: string, value: string | undefined, line: number): number {
  const parsed = Number(value);
  if (value === undefined || value.trim() === "" || !Number.isFinite(parsed)) {
    throw new SchemaError(
      file, column,
      `column "${column}" has non-numeric value ${JSON.stringify(value ?? "")} on data row ${line}`,
    );
  }
  return parsed;
}

/** Parse a trajectories.csv payload. The file name only labels errors. */
export function parseTrajectories(file: string, text: string): TrajectoryRow[] {
  return parseRows(file, text, TRAJECTORY_COLUMNS).map((row, i) => ({
    mechanism: row.mechanism ?? "",
    replication: toNumber(file, "replication", row.replication, i + 1),
    t: toNumber(file, "t", row.t, i + 1),
    k: toNumber(file, "k", row.k, i + 1),
    p: toNumber(file, "p", row.p, i + 1),
  }));
}

/** Parse an errors.csv payload. The file name only labels errors. */
export function parseErrorReports(file: string, text: string): ErrorReportRow[] {
  return parseRows(file, text, ERROR_COLUMNS).map((row, i) => ({
    metric: row.metric ?? "",
    mechanism: row.mechanism ?? "",
    n: toNumber(file, "N", row.N, i + 1),
    m: row.M === undefined || row.M.trim() === "" ? null : toNumber(file, "M", row.M, i + 1),
    t: toNumber(file, "T", row.T, i + 1),
    estimate: toNumber(file, "estimate", row.estimate, i + 1),
    stdError: toNumber(file, "std_error", row.std_error, i + 1),
    bound: toNumber(file, "bound", row.bound, i + 1),
    replications: toNumber(file, "replications", row.replications, i + 1),
  }));
}
