import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { COLORS, renderFigure } from "../src/render.js";
import { parseJob, PlotJob } from "../src/job.js";
import { readMetadata } from "../src/svg.js";

const fixture = (name: string): string =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");

const fluctuation = JSON.parse(fixture("snowball_fluctuation.json")) as {
  outputs: { p_min_inf: number; p_max_inf: number };
};

const count = (text: string, needle: string): number =>
  text.split(needle).length - 1;

function bandJob(input: string, overrides: Partial<PlotJob> = {}): PlotJob {
  return { ...parseJob({ kind: "band", input, output: "out.svg" }), ...overrides };
}

describe("band figures", () => {
  it("overlays one red polyline per replication plus the green mean-field curve", () => {
    const svg = renderFigure(bandJob("fig1_left.csv"), fixture("fig1_left.trajectories.csv"));
    expect(count(svg, `<polyline points=`)).toBe(8 + 1);
    expect(count(svg, `stroke="${COLORS.replication}" stroke-width="1" stroke-opacity="0.45"`)).toBe(8);
    expect(count(svg, `stroke="${COLORS.meanField}"`)).toBeGreaterThanOrEqual(1);
    const meta = readMetadata(svg) as Record<string, unknown>;
    expect(meta.kind).toBe("band");
    expect(meta.replications).toBe(8);
    expect(meta.t_max).toBe(60);
    expect(meta.mechanisms).toEqual(["full", "meanfield", "mkv"]);
  });

  it("renders the periodic-drive scenarios without error", () => {
    for (const name of ["fig5", "fig8"] as const) {
      const svg = renderFigure(bandJob(`${name}.csv`), fixture(`${name}.trajectories.csv`));
      expect(svg.startsWith("<svg xmlns=")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
      const meta = readMetadata(svg) as Record<string, unknown>;
      expect(meta.replications).toBe(5);
      expect(meta.t_max).toBe(120);
    }
  });

  it("is a pure function of its inputs", () => {
    const job = bandJob("fig5.csv");
    const text = fixture("fig5.trajectories.csv");
    expect(renderFigure(job, text)).toBe(renderFigure(job, text));
  });

  it("rejects an empty replication set", () => {
    const headerOnly = "mechanism,replication,t,k,p\n";
    expect(() => renderFigure(bandJob("empty.csv"), headerOnly))
      .toThrowError(/no replications of the full-information process/);
    const wrongCommunity = bandJob("fig5.csv", { community: 3 });
    expect(() => renderFigure(wrongCommunity, fixture("fig5.trajectories.csv")))
      .toThrowError(/community 3/);
  });
});

describe("oscillation figures", () => {
  const job = parseJob({
    kind: "oscillation",
    input: "snowball.csv",
    output: "out.svg",
    title: "snowball",
    limits: {
      p_min: fluctuation.outputs.p_min_inf,
      p_max: fluctuation.outputs.p_max_inf,
    },
  });

  it("adds two blue limit lines at the closed-form levels", () => {
    const svg = renderFigure(job, fixture("snowball.trajectories.csv"));
    expect(count(svg, `class="limit-line"`)).toBe(2);
    expect(count(svg, `stroke="${COLORS.limit}"`)).toBeGreaterThanOrEqual(2);
  });

  it("records the limit levels to 6 decimals in the rendered metadata", () => {
    const svg = renderFigure(job, fixture("snowball.trajectories.csv"));
    const meta = readMetadata(svg) as {
      limit_lines: { p_min: number; p_max: number };
    };
    expect(meta.limit_lines.p_min).toBe(Number(fluctuation.outputs.p_min_inf.toFixed(6)));
    expect(meta.limit_lines.p_max).toBe(Number(fluctuation.outputs.p_max_inf.toFixed(6)));
    expect(meta.limit_lines.p_min).toBe(0.008548);
    expect(meta.limit_lines.p_max).toBe(0.741452);
  });
});

describe("error-scaling figures", () => {
  const job = parseJob({ kind: "error-scaling", input: "errors.csv", output: "out.svg" });

  it("plots estimates against the swept survey size with the bound", () => {
    const svg = renderFigure(job, fixture("toy_half.errors.csv"));
    const meta = readMetadata(svg) as Record<string, unknown>;
    expect(meta.swept).toBe("M");
    expect(meta.points).toBe(3);
    expect(meta.metric).toBe("local");
    expect(count(svg, "<circle ")).toBe(3);
    expect(count(svg, `stroke-dasharray="6 4"`)).toBeGreaterThanOrEqual(1);
    expect(svg).toContain("M (log scale)");
  });

  it("rejects a file with nothing swept", () => {
    const text = "metric,mechanism,N,M,T,estimate,std_error,bound,replications\n"
      + "local,common(10),2000,10,10,0.09,0.01,0.15,20\n";
    expect(() => renderFigure(job, text)).toThrowError(/nothing varies/);
  });
});
