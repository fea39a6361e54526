/**
 * Figure builders over starkdecay CSV tables.
 *
 * These scripts never recompute physics: every plotted number is a CSV
 * cell (slope fits and legend ordering are presentation arithmetic on
 * those cells), and the sha256 of the consumed cells is embedded in the
 * SVG metadata for auditing.
 */

import {
  CONVERGENCE_SCHEMA,
  SWEEP_SCHEMA,
  TIMESERIES_SCHEMA,
  column,
  hasColumn,
  requireSchema,
  type CsvTable,
} from "./csv.js";
import { cellChecksum, type ConsumedCells } from "./checksum.js";
import { PALETTE, renderFigure, type Series } from "./svg.js";

export type FigureKind = "decay" | "sweep" | "convergence";

export interface PlotSpec {
  kind: FigureKind;
  /** Input CSV tables, one for sweep/convergence, one or more for decay. */
  tables: CsvTable[];
}

const METHODS = ["closed", "rk4", "collision", "mc"] as const;
const METHOD_DASH: Record<string, string | undefined> = {
  closed: undefined,
  rk4: "7 3",
  collision: "2 3",
  mc: "10 3 2 3",
};

export function buildFigure(spec: PlotSpec): string {
  switch (spec.kind) {
    case "decay":
      return buildDecayFigure(spec.tables);
    case "sweep":
      return buildSweepFigure(spec.tables);
    case "convergence":
      return buildConvergenceFigure(spec.tables);
  }
}

/**
 * Excited-population decay overlay: one curve per method per input file.
 * Files are ordered by their final closed-form population (largest first,
 * i.e. most suppressed decay on top of the legend) - an ordering read off
 * CSV cells, not recomputed physics.
 */
export function buildDecayFigure(tables: CsvTable[]): string {
  if (tables.length === 0) throw new Error("decay figure needs at least one CSV");
  tables.forEach((t) => requireSchema(t, TIMESERIES_SCHEMA));

  const ordered = [...tables].sort((a, b) => {
    const fa = column(a, "rho22_closed").at(-1)!;
    const fb = column(b, "rho22_closed").at(-1)!;
    return fb - fa;
  });

  const series: Series[] = [];
  const consumed: ConsumedCells[] = [];
  ordered.forEach((table, ti) => {
    const tau = column(table, "tau");
    const etaLabel = table.params["eta"] !== undefined ? `eta=${trimNumber(table.params["eta"])}` : table.source;
    const columnsUsed = ["tau"];
    METHODS.forEach((method, mi) => {
      const name = `rho22_${method}`;
      if (!hasColumn(table, name)) return;
      columnsUsed.push(name);
      series.push({
        x: tau,
        y: column(table, name),
        label: `${etaLabel} ${method}`,
        color: PALETTE[ti % PALETTE.length],
        dash: METHOD_DASH[method],
      });
    });
    consumed.push({ table, columns: columnsUsed });
  });

  const checksum = cellChecksum(consumed);
  return renderFigure({
    title: "Excited-state population decay",
    xAxis: { label: "tau" },
    yAxis: { label: "rho_ee" },
    yRange: [0, 1.05],
    series,
    metadata: {
      kind: "decay",
      schema: TIMESERIES_SCHEMA,
      checksum,
      inputs: ordered.map((t) => ({
        source: t.source,
        params: t.params,
        columns: consumed[ordered.indexOf(t)].columns,
      })),
    },
  });
}

/**
 * Suppression factor and level-shift sweep: S(eta) bounded by [0, 1] with
 * a reference line at 1, delta(eta) overlaid, and the S minimum (the
 * frozen-decay point) annotated from its CSV row.
 */
export function buildSweepFigure(tables: CsvTable[]): string {
  if (tables.length !== 1) throw new Error("sweep figure needs exactly one CSV");
  const table = tables[0];
  requireSchema(table, SWEEP_SCHEMA);

  const eta = column(table, "eta");
  const s = column(table, "suppression");
  const delta = column(table, "delta");
  let iMin = 0;
  s.forEach((v, i) => {
    if (v < s[iMin]) iMin = i;
  });

  const consumed: ConsumedCells[] = [
    { table, columns: ["eta", "gamma", "delta", "suppression"] },
  ];
  const checksum = cellChecksum(consumed);
  return renderFigure({
    title: "Decay suppression and level shift vs gauge parameter",
    xAxis: { label: "eta" },
    yAxis: { label: "S(eta), delta(eta)" },
    series: [
      { x: eta, y: s, label: "suppression S(eta)", color: PALETTE[0] },
      { x: eta, y: delta, label: "shift delta(eta)", color: PALETTE[1], dash: "7 3" },
    ],
    refLinesY: [1.0],
    markers: [
      {
        x: eta[iMin],
        y: s[iMin],
        label: `S=${s[iMin].toExponential(1)} at eta=${trimNumber(String(eta[iMin]))}`,
      },
    ],
    metadata: {
      kind: "sweep",
      schema: SWEEP_SCHEMA,
      checksum,
      inputs: [{ source: table.source, params: table.params, columns: consumed[0].columns }],
      minimum: { eta: eta[iMin], suppression: s[iMin] },
    },
  });
}

/**
 * Log-log error-vs-dtau plot with least-squares slopes in the legend
 * (slope of ln err against ln dtau over the table rows).  Needs at least
 * three rows for a meaningful fit.
 */
export function buildConvergenceFigure(tables: CsvTable[]): string {
  if (tables.length !== 1) throw new Error("convergence figure needs exactly one CSV");
  const table = tables[0];
  requireSchema(table, CONVERGENCE_SCHEMA);
  if (table.rows.length < 3) {
    throw new Error(
      `convergence figure needs at least 3 points, got ${table.rows.length}`,
    );
  }

  const dtau = column(table, "dtau");
  const errCols = [
    "collision_err_rho22",
    "collision_err_arg_rho21",
    "rk4_err_rho22",
  ];
  const series: Series[] = [];
  const slopes: Record<string, number> = {};
  errCols.forEach((name, i) => {
    const errs = column(table, name);
    const slope = fitSlope(dtau, errs);
    slopes[name] = slope;
    series.push({
      x: dtau,
      y: errs,
      label: `${name} (slope ${slope.toFixed(2)})`,
      color: PALETTE[i],
      dash: i === 1 ? "2 3" : undefined,
    });
  });

  const consumed: ConsumedCells[] = [{ table, columns: ["dtau", ...errCols] }];
  const checksum = cellChecksum(consumed);
  return renderFigure({
    title: "Oracle error vs slice length (log-log)",
    xAxis: { label: "dtau", log: true },
    yAxis: { label: "max error vs closed form", log: true },
    series,
    metadata: {
      kind: "convergence",
      schema: CONVERGENCE_SCHEMA,
      checksum,
      slopes,
      inputs: [{ source: table.source, params: table.params, columns: consumed[0].columns }],
    },
  });
}

/** Least-squares slope of ln(y) on ln(x), ignoring non-positive points. */
export function fitSlope(x: number[], y: number[]): number {
  const pts = x
    .map((xi, i) => [xi, y[i]] as const)
    .filter(([xi, yi]) => xi > 0 && yi > 0)
    .map(([xi, yi]) => [Math.log(xi), Math.log(yi)] as const);
  if (pts.length < 2) return NaN;
  const n = pts.length;
  const mx = pts.reduce((a, [u]) => a + u, 0) / n;
  const my = pts.reduce((a, [, v]) => a + v, 0) / n;
  let num = 0;
  let den = 0;
  for (const [u, v] of pts) {
    num += (u - mx) * (v - my);
    den += (u - mx) * (u - mx);
  }
  return num / den;
}

function trimNumber(raw: string): string {
  const v = Number(raw);
  if (!Number.isFinite(v)) return raw;
  return String(Number(v.toPrecision(6)));
}
