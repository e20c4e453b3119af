/**
 * Regroup flat trajectory rows into drawable curves.
 *
 * Red band curves are the replications of the full-information process;
 * the single green curve is the deterministic-given-influencer recursion
 * ("mkv" rows) when present, otherwise the census of the mean-field
 * agent process.
 */

import { TrajectoryRow } from "./csv.js";
import { SchemaError } from "./errors.js";

export interface Curve {
  mechanism: string;
  replication: number;
  /** [t, p] pairs in increasing t. */
  points: Array<[number, number]>;
}

export interface FigureSeries {
  /** One curve per replication of the full-information process. */
  replications: Curve[];
  /** The mean-field trajectory, when the CSV contains one. */
  meanField: Curve | null;
  /** Distinct mechanism labels present in the file. */
  mechanisms: string[];
}

function groupCurves(rows: TrajectoryRow[], mechanism: string, k: number): Curve[] {
  const byReplication = new Map<number, Array<[number, number]>>();
  for (const row of rows) {
    if (row.mechanism !== mechanism || row.k !== k) continue;
    let points = byReplication.get(row.replication);
    if (points === undefined) {
      points = [];
      byReplication.set(row.replication, points);
    }
    points.push([row.t, row.p]);
  }
  return [...byReplication.entries()]
    .sort(([a], [b]) => a - b)
    .map(([replication, points]) => ({
      mechanism,
      replication,
      points: points.sort(([a], [b]) => a - b),
    }));
}

/** Collect the band/oscillation series for one community index. */
export function collectSeries(file: string, rows: TrajectoryRow[], k: number): FigureSeries {
  const mechanisms = [...new Set(rows.map((row) => row.mechanism))];
  const replications = groupCurves(rows, "full", k);
  if (replications.length === 0) {
    throw new SchemaError(
      file, null,
      `no replications of the full-information process for community ${k}`,
    );
  }
  const meanFieldLabel = mechanisms.includes("mkv") ? "mkv"
    : mechanisms.includes("meanfield") ? "meanfield" : null;
  const meanField = meanFieldLabel === null ? null
    : groupCurves(rows, meanFieldLabel, k)[0] ?? null;
  return { replications, meanField, mechanisms };
}
