export {
  CONVERGENCE_SCHEMA,
  SUPPORTED_SCHEMAS,
  SWEEP_SCHEMA,
  SchemaError,
  TIMESERIES_SCHEMA,
  column,
  columnIndex,
  hasColumn,
  parseCsv,
  requireSchema,
  type CsvTable,
} from "./csv.js";
export { canonicalCellText, cellChecksum, type ConsumedCells } from "./checksum.js";
export { extractMetadata, renderFigure, type FigureSpec, type Series } from "./svg.js";
export {
  buildConvergenceFigure,
  buildDecayFigure,
  buildFigure,
  buildSweepFigure,
  fitSlope,
  type FigureKind,
  type PlotSpec,
} from "./plots.js";
export { parseArgs, run } from "./cli.js";
