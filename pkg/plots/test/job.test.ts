import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join, resolve } from "path";
import { describe, expect, it } from "vitest";

import { JobConfigError } from "../src/errors.js";
import { loadJob, parseJob } from "../src/job.js";

const band = { kind: "band", input: "a.csv", output: "a.svg" };

describe("parseJob", () => {
  it("fills defaults for a minimal band job", () => {
    const job = parseJob(band);
    expect(job).toEqual({
      kind: "band", input: "a.csv", output: "a.svg",
      community: 0, title: "band", limits: null,
    });
  });

  it("accepts explicit community, title and oscillation limits", () => {
    const job = parseJob({
      kind: "oscillation", input: "a.csv", output: "a.svg",
      community: 1, title: "snowball", limits: { p_min: 0.1, p_max: 0.7 },
    });
    expect(job.community).toBe(1);
    expect(job.limits).toEqual({ pMin: 0.1, pMax: 0.7 });
  });

  const failures: Array<[string, unknown, RegExp]> = [
    ["not an object", [1], /^job:/],
    ["missing kind", { input: "a", output: "b" }, /^kind:/],
    ["unknown kind", { ...band, kind: "pie" }, /must be one of band, oscillation, error-scaling/],
    ["missing input", { kind: "band", output: "b" }, /^input:/],
    ["missing output", { kind: "band", input: "a" }, /^output:/],
    ["unknown field", { ...band, color: "red" }, /^color: unknown field/],
    ["oscillation without limits", { ...band, kind: "oscillation" },
      /^limits: an oscillation figure needs/],
    ["limits on a band figure", { ...band, limits: { p_min: 0, p_max: 1 } },
      /^limits: only an oscillation figure/],
    ["limits with unknown key",
      { ...band, kind: "oscillation", limits: { p_min: 0, p_max: 1, color: "blue" } },
      /^limits\.color: unknown field/],
    ["non-numeric p_min",
      { ...band, kind: "oscillation", limits: { p_min: "0", p_max: 1 } },
      /^limits\.p_min:/],
    ["inverted limits",
      { ...band, kind: "oscillation", limits: { p_min: 0.8, p_max: 0.2 } },
      /p_min must be below p_max/],
    ["negative community", { ...band, community: -1 }, /^community:/],
    ["fractional community", { ...band, community: 0.5 }, /^community:/],
  ];
  for (const [name, raw, pattern] of failures) {
    it(`rejects ${name}`, () => {
      expect(() => parseJob(raw)).toThrowError(JobConfigError);
      expect(() => parseJob(raw)).toThrowError(pattern);
    });
  }
});

describe("loadJob", () => {
  it("resolves input and output against the job file's directory", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-job-"));
    const path = join(dir, "job.json");
    writeFileSync(path, JSON.stringify({ ...band, input: "data/a.csv", output: "figs/a.svg" }));
    const job = loadJob(path);
    expect(job.input).toBe(resolve(dir, "data/a.csv"));
    expect(job.output).toBe(resolve(dir, "figs/a.svg"));
  });

  it("reports unreadable and non-JSON job files as config errors", () => {
    expect(() => loadJob("/no/such/job.json")).toThrowError(/^job: cannot read/);
    const dir = mkdtempSync(join(tmpdir(), "plots-job-"));
    const path = join(dir, "job.json");
    writeFileSync(path, "{nope");
    expect(() => loadJob(path)).toThrowError(/^job: invalid JSON/);
  });
});
