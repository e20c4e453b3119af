/**
 * Figure assembly. Rendering is a pure function of the job and the CSV
 * text: no clocks, no randomness, fixed coordinate precision — rerunning
 * an identically-specified job reproduces the SVG byte for byte.
 *
 * Color convention: red replication curves, green mean-field curve, blue
 * asymptotic limit lines (and, on error-scaling figures, the blue bound).
 */

import { scaleLinear, scaleLog } from "d3-scale";

import { ErrorReportRow, parseErrorReports, parseTrajectories } from "./csv.js";
import { SchemaError } from "./errors.js";
import { PlotJob } from "./job.js";
import { collectSeries, Curve } from "./series.js";
import { el, fmt, metadataElement, polyline, svgDocument } from "./svg.js";

export const COLORS = {
  replication: "#d62728",
  meanField: "#2ca02c",
  limit: "#1f77b4",
  axis: "#444444",
} as const;

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 40, right: 28, bottom: 48, left: 64 } as const;
const FONT = "font-family=\"sans-serif\"";

const round6 = (value: number): number => Number(value.toFixed(6));

type Scale = (value: number) => number;

interface Frame {
  x: Scale;
  y: Scale;
  xTicks: number[];
  yTicks: number[];
}

function frameElements(frame: Frame, xLabel: string, yLabel: string, title: string): string[] {
  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;
  const parts: string[] = [
    el("text", {
      x: WIDTH / 2, y: 22, "text-anchor": "middle",
      "font-family": "sans-serif", "font-size": 15, fill: "#222222",
    }, title),
    el("line", { x1: left, y1: bottom, x2: right, y2: bottom, stroke: COLORS.axis }),
    el("line", { x1: left, y1: top, x2: left, y2: bottom, stroke: COLORS.axis }),
  ];
  for (const tick of frame.xTicks) {
    const x = frame.x(tick);
    parts.push(el("line", { x1: fmt(x), y1: bottom, x2: fmt(x), y2: bottom + 5, stroke: COLORS.axis }));
    parts.push(el("text", {
      x: fmt(x), y: bottom + 18, "text-anchor": "middle",
      "font-family": "sans-serif", "font-size": 11, fill: COLORS.axis,
    }, String(tick)));
  }
  for (const tick of frame.yTicks) {
    const y = frame.y(tick);
    parts.push(el("line", { x1: left - 5, y1: fmt(y), x2: left, y2: fmt(y), stroke: COLORS.axis }));
    parts.push(el("line", {
      x1: left, y1: fmt(y), x2: right, y2: fmt(y),
      stroke: "#dddddd", "stroke-width": 0.5,
    }));
    parts.push(el("text", {
      x: left - 8, y: fmt(y + 4), "text-anchor": "end",
      "font-family": "sans-serif", "font-size": 11, fill: COLORS.axis,
    }, String(Number(tick.toPrecision(6)))));
  }
  parts.push(el("text", {
    x: (left + right) / 2, y: HEIGHT - 10, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 12, fill: "#222222",
  }, xLabel));
  parts.push(el("text", {
    x: 16, y: (top + bottom) / 2, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 12, fill: "#222222",
    transform: `rotate(-90 16 ${(top + bottom) / 2})`,
  }, yLabel));
  return parts;
}

function legendElements(entries: Array<{ color: string; dashed: boolean; label: string }>): string[] {
  const parts: string[] = [];
  let y = MARGIN.top + 8;
  for (const entry of entries) {
    const x = WIDTH - MARGIN.right - 150;
    parts.push(el("line", {
      x1: x, y1: y, x2: x + 22, y2: y, stroke: entry.color, "stroke-width": 2,
      ...(entry.dashed ? { "stroke-dasharray": "6 4" } : {}),
    }));
    parts.push(el("text", {
      x: x + 28, y: y + 4, "font-family": "sans-serif", "font-size": 11, fill: "#222222",
    }, entry.label));
    y += 16;
  }
  return parts;
}

function project(curve: Curve, x: Scale, y: Scale): Array<[number, number]> {
  return curve.points.map(([t, p]) => [x(t), y(p)]);
}

function bandFigure(job: PlotJob, csvText: string): string {
  const series = collectSeries(job.input, parseTrajectories(job.input, csvText), job.community);
  const drawn = series.meanField === null
    ? series.replications
    : [...series.replications, series.meanField];
  const tMax = Math.max(...drawn.flatMap((c) => c.points.map(([t]) => t)));
  const values = drawn.flatMap((c) => c.points.map(([, p]) => p));
  if (job.limits !== null) {
    values.push(job.limits.pMin, job.limits.pMax);
  }
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (hi - lo < 1e-9) {
    lo -= 0.05;
    hi += 0.05;
  }
  const pad = 0.06 * (hi - lo);
  const x = scaleLinear().domain([0, tMax]).range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = scaleLinear().domain([lo - pad, hi + pad])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]).nice();
  const frame: Frame = { x, y, xTicks: x.ticks(8), yTicks: y.ticks(6) };

  const body: string[] = [];
  for (const curve of series.replications) {
    body.push(polyline(project(curve, x, y), {
      stroke: COLORS.replication, "stroke-width": 1, "stroke-opacity": 0.45,
    }));
  }
  if (series.meanField !== null) {
    body.push(polyline(project(series.meanField, x, y), {
      stroke: COLORS.meanField, "stroke-width": 2,
    }));
  }
  if (job.limits !== null) {
    for (const [value, label] of [[job.limits.pMin, "p_min"], [job.limits.pMax, "p_max"]] as const) {
      body.push(el("line", {
        x1: MARGIN.left, y1: fmt(y(value)), x2: WIDTH - MARGIN.right, y2: fmt(y(value)),
        stroke: COLORS.limit, "stroke-width": 1.5, "stroke-dasharray": "6 4",
        class: "limit-line",
      }));
      body.push(el("text", {
        x: MARGIN.left + 6, y: fmt(y(value) - 5),
        "font-family": "sans-serif", "font-size": 10, fill: COLORS.limit,
      }, `${label} = ${round6(value)}`));
    }
  }
  const legend = [
    { color: COLORS.replication, dashed: false, label: "replications (full)" },
    ...(series.meanField !== null
      ? [{ color: COLORS.meanField, dashed: false, label: "mean-field" }] : []),
    ...(job.limits !== null
      ? [{ color: COLORS.limit, dashed: true, label: "long-run limits" }] : []),
  ];
  const metadata = metadataElement({
    kind: job.kind,
    community: job.community,
    replications: series.replications.length,
    mechanisms: series.mechanisms,
    t_max: tMax,
    ...(job.limits !== null
      ? { limit_lines: { p_min: round6(job.limits.pMin), p_max: round6(job.limits.pMax) } }
      : {}),
  });
  return svgDocument(WIDTH, HEIGHT, [
    metadata,
    ...frameElements(frame, "t", "opinion share", job.title),
    ...body,
    ...legendElements(legend),
  ]);
}

function sweptColumn(file: string, rows: ErrorReportRow[]): "M" | "N" | "T" {
  const distinct = (values: Array<number | null>): number =>
    new Set(values.filter((v) => v !== null)).size;
  const counts: Array<["M" | "N" | "T", number]> = [
    ["M", distinct(rows.map((r) => r.m))],
    ["N", distinct(rows.map((r) => r.n))],
    ["T", distinct(rows.map((r) => r.t))],
  ];
  const swept = counts.find(([, count]) => count > 1);
  if (swept === undefined) {
    throw new SchemaError(file, null, "nothing varies across rows (need a sweep over M, N or T)");
  }
  return swept[0];
}

function errorScalingFigure(job: PlotJob, csvText: string): string {
  const rows = parseErrorReports(job.input, csvText);
  if (rows.length === 0) {
    throw new SchemaError(job.input, null, "no error reports in the file");
  }
  const swept = sweptColumn(job.input, rows);
  const pick = (row: ErrorReportRow): number | null =>
    swept === "M" ? row.m : swept === "N" ? row.n : row.t;
  const points = rows
    .filter((row) => pick(row) !== null)
    .map((row) => ({ x: pick(row) as number, row }))
    .sort((a, b) => a.x - b.x);

  const xs = points.map((p) => p.x);
  const logX = xs[0] > 0 && xs[xs.length - 1] / xs[0] >= 10;
  const x = (logX ? scaleLog() : scaleLinear())
    .domain([xs[0], xs[xs.length - 1]])
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const yMax = Math.max(...points.map((p) =>
    Math.max(p.row.bound, p.row.estimate + 2 * p.row.stdError)));
  const y = scaleLinear().domain([0, yMax * 1.08])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]).nice();
  const xTicks = logX
    ? x.ticks().filter((t) => Number.isInteger(Math.log10(t)))
    : x.ticks(8);
  const frame: Frame = { x, y, xTicks, yTicks: y.ticks(6) };

  const body: string[] = [
    polyline(points.map((p) => [x(p.x), y(p.row.bound)]), {
      stroke: COLORS.limit, "stroke-width": 1.5, "stroke-dasharray": "6 4",
    }),
    polyline(points.map((p) => [x(p.x), y(p.row.estimate)]), {
      stroke: COLORS.replication, "stroke-width": 2,
    }),
  ];
  for (const p of points) {
    const half = 2 * p.row.stdError;
    body.push(el("line", {
      x1: fmt(x(p.x)), y1: fmt(y(p.row.estimate - half)),
      x2: fmt(x(p.x)), y2: fmt(y(p.row.estimate + half)),
      stroke: COLORS.replication, "stroke-width": 1,
    }));
    body.push(el("circle", {
      cx: fmt(x(p.x)), cy: fmt(y(p.row.estimate)), r: 3, fill: COLORS.replication,
    }));
  }
  const metadata = metadataElement({
    kind: job.kind,
    swept,
    points: points.length,
    mechanisms: [...new Set(points.map((p) => p.row.mechanism))],
    metric: points[0].row.metric,
  });
  return svgDocument(WIDTH, HEIGHT, [
    metadata,
    ...frameElements(frame, swept + (logX ? " (log scale)" : ""), "error", job.title),
    ...body,
    ...legendElements([
      { color: COLORS.replication, dashed: false, label: "estimate ± 2 SE" },
      { color: COLORS.limit, dashed: true, label: "bound" },
    ]),
  ]);
}

/** Render one figure from the job and the raw CSV text. Pure. */
export function renderFigure(job: PlotJob, csvText: string): string {
  if (job.kind === "error-scaling") {
    return errorScalingFigure(job, csvText);
  }
  return bandFigure(job, csvText);
}
