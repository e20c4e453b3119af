/**
 * Plot job configuration: the same structured-JSON convention as the
 * simulator's scenario files. One job describes one figure:
 *
 *   {
 *     "kind": "band" | "oscillation" | "error-scaling",
 *     "input": "out/snowball/trajectories.csv",
 *     "output": "figures/snowball.svg",
 *     "community": 0,
 *     "title": "snowball",
 *     "limits": { "p_min": 0.00855, "p_max": 0.74145 }
 *   }
 *
 * band and oscillation read a trajectories.csv; error-scaling reads an
 * errors.csv. `limits` is required for oscillation figures (the two blue
 * horizontal lines) and rejected elsewhere. Relative paths are resolved
 * against the job file's directory.
 */

import { readFileSync } from "fs";
import { dirname, resolve } from "path";

import { JobConfigError } from "./errors.js";

export const FIGURE_KINDS = ["band", "oscillation", "error-scaling"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface LimitLines {
  pMin: number;
  pMax: number;
}

export interface PlotJob {
  kind: FigureKind;
  input: string;
  output: string;
  community: number;
  title: string;
  limits: LimitLines | null;
}

const KNOWN_KEYS = new Set(["kind", "input", "output", "community", "title", "limits"]);

function requireString(raw: Record<string, unknown>, key: string): string {
  const value = raw[key];
  if (typeof value !== "string" || value === "") {
    throw new JobConfigError(key, `expected a nonempty string, got ${JSON.stringify(value)}`);
  }
  return value;
}

function parseLimits(value: unknown): LimitLines {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new JobConfigError("limits", `expected an object with p_min and p_max, got ${JSON.stringify(value)}`);
  }
  const raw = value as Record<string, unknown>;
  for (const key of Object.keys(raw)) {
    if (key !== "p_min" && key !== "p_max") {
      throw new JobConfigError(`limits.${key}`, "unknown field");
    }
  }
  const pMin = raw.p_min;
  const pMax = raw.p_max;
  if (typeof pMin !== "number" || !Number.isFinite(pMin)) {
    throw new JobConfigError("limits.p_min", `expected a finite number, got ${JSON.stringify(pMin)}`);
  }
  if (typeof pMax !== "number" || !Number.isFinite(pMax)) {
    throw new JobConfigError("limits.p_max", `expected a finite number, got ${JSON.stringify(pMax)}`);
  }
  if (pMin >= pMax) {
    throw new JobConfigError("limits", `p_min must be below p_max, got ${pMin} >= ${pMax}`);
  }
  return { pMin, pMax };
}

/** Validate a decoded job object. Raises JobConfigError naming the bad field. */
export function parseJob(value: unknown): PlotJob {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new JobConfigError("job", `expected an object, got ${JSON.stringify(value)}`);
  }
  const raw = value as Record<string, unknown>;
  for (const key of Object.keys(raw)) {
    if (!KNOWN_KEYS.has(key)) {
      throw new JobConfigError(key, "unknown field");
    }
  }
  const kind = requireString(raw, "kind");
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new JobConfigError("kind", `must be one of ${FIGURE_KINDS.join(", ")}, got ${JSON.stringify(kind)}`);
  }
  const input = requireString(raw, "input");
  const output = requireString(raw, "output");

  let community = 0;
  if (raw.community !== undefined) {
    if (typeof raw.community !== "number" || !Number.isInteger(raw.community) || raw.community < 0) {
      throw new JobConfigError("community", `expected a nonnegative integer, got ${JSON.stringify(raw.community)}`);
    }
    community = raw.community;
  }

  let title = kind;
  if (raw.title !== undefined) {
    title = requireString(raw, "title");
  }

  let limits: LimitLines | null = null;
  if (raw.limits !== undefined) {
    if (kind !== "oscillation") {
      throw new JobConfigError("limits", `only an oscillation figure draws limit lines, kind is ${JSON.stringify(kind)}`);
    }
    limits = parseLimits(raw.limits);
  } else if (kind === "oscillation") {
    throw new JobConfigError("limits", "an oscillation figure needs p_min and p_max limit lines");
  }

  return { kind: kind as FigureKind, input, output, community, title, limits };
}

/** Read a job file, resolving input/output paths against its directory. */
export function loadJob(path: string): PlotJob {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new JobConfigError("job", `cannot read ${JSON.stringify(path)}: ${(err as Error).message}`);
  }
  let decoded: unknown;
  try {
    decoded = JSON.parse(text);
  } catch (err) {
    throw new JobConfigError("job", `invalid JSON in ${JSON.stringify(path)}: ${(err as Error).message}`);
  }
  const job = parseJob(decoded);
  const base = dirname(resolve(path));
  return { ...job, input: resolve(base, job.input), output: resolve(base, job.output) };
}
