#!/usr/bin/env node
/**
 * plots <job.json> [more-jobs.json ...]
 *
 * Reads each job configuration, renders its figure from the referenced
 * CSV, and writes the SVG to the job's output path (creating directories,
 * overwriting an existing file). Prints one output path per job.
 *
 * Exit codes: 0 ok, 2 malformed job configuration, 3 input CSV schema
 * mismatch or empty data, 1 anything else.
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import { dirname } from "path";
import { pathToFileURL } from "url";

import { JobConfigError, SchemaError } from "./errors.js";
import { loadJob } from "./job.js";
import { renderFigure } from "./render.js";

const USAGE = "usage: plots <job.json> [more-jobs.json ...]";

/** Render every job file; returns the process exit code. */
export function main(argv: string[]): number {
  if (argv.includes("--help") || argv.includes("-h")) {
    console.log(USAGE);
    return 0;
  }
  if (argv.length === 0) {
    console.error(USAGE);
    return 2;
  }
  try {
    for (const jobPath of argv) {
      const job = loadJob(jobPath);
      let csvText: string;
      try {
        csvText = readFileSync(job.input, "utf8");
      } catch (err) {
        throw new SchemaError(job.input, null, `cannot read input: ${(err as Error).message}`);
      }
      const svg = renderFigure(job, csvText);
      mkdirSync(dirname(job.output), { recursive: true });
      writeFileSync(job.output, svg, "utf8");
      console.log(job.output);
    }
  } catch (err) {
    if (err instanceof JobConfigError) {
      console.error(`config error — ${err.message}`);
      return 2;
    }
    if (err instanceof SchemaError) {
      console.error(`schema mismatch — ${err.message}`);
      return 3;
    }
    console.error(`error — ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(process.argv.slice(2)));
}
