export { ErrorReportRow, parseErrorReports, parseTrajectories, TrajectoryRow,
         ERROR_COLUMNS, TRAJECTORY_COLUMNS } from "./csv.js";
export { JobConfigError, SchemaError } from "./errors.js";
export { FIGURE_KINDS, FigureKind, LimitLines, loadJob, parseJob, PlotJob } from "./job.js";
export { COLORS, renderFigure } from "./render.js";
export { collectSeries, Curve, FigureSeries } from "./series.js";
export { readMetadata } from "./svg.js";
export { main } from "./cli.js";
