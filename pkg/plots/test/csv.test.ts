import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { parseErrorReports, parseTrajectories } from "../src/csv.js";
import { SchemaError } from "../src/errors.js";

const fixture = (name: string): string =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");

describe("parseTrajectories", () => {
  it("reads every row of a produced file", () => {
    const rows = parseTrajectories("snowball.csv", fixture("snowball.trajectories.csv"));
    // 3 mechanism labels x 6 replications x (T=200 + 1) steps
    expect(rows).toHaveLength(3 * 6 * 201);
    expect(new Set(rows.map((r) => r.mechanism))).toEqual(
      new Set(["full", "meanfield", "mkv"]));
    expect(rows.every((r) => r.p >= 0 && r.p <= 1)).toBe(true);
  });

  it("names a missing column", () => {
    const text = "mechanism,replication,t,k\nfull,0,0,0\n";
    expect(() => parseTrajectories("broken.csv", text))
      .toThrowError(/missing column "p"/);
    try {
      parseTrajectories("broken.csv", text);
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      expect((err as SchemaError).column).toBe("p");
      expect((err as SchemaError).file).toBe("broken.csv");
    }
  });

  it("names a non-numeric cell and its row", () => {
    const text = "mechanism,replication,t,k,p\nfull,0,0,0,oops\n";
    expect(() => parseTrajectories("bad.csv", text))
      .toThrowError(/column "p" has non-numeric value "oops" on data row 1/);
  });
});

describe("parseErrorReports", () => {
  it("reads a produced sweep file", () => {
    const rows = parseErrorReports("errors.csv", fixture("toy_half.errors.csv"));
    expect(rows).toHaveLength(3);
    expect(rows.map((r) => r.m)).toEqual([10, 100, 1000]);
    expect(rows.every((r) => r.metric === "local")).toBe(true);
    expect(rows.every((r) => r.estimate <= r.bound + 3 * r.stdError)).toBe(true);
  });

  it("treats an empty M cell as a census/recursion regime", () => {
    const text = "metric,mechanism,N,M,T,estimate,std_error,bound,replications\n"
      + "local,meanfield,2000,,10,0.01,0.001,0.011,20\n";
    const [row] = parseErrorReports("errors.csv", text);
    expect(row.m).toBeNull();
    expect(row.mechanism).toBe("meanfield");
  });

  it("names a missing column", () => {
    const text = "metric,mechanism,N,M,T,estimate,std_error,replications\n";
    expect(() => parseErrorReports("errors.csv", text))
      .toThrowError(/missing column "bound"/);
  });
});
