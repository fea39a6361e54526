/**
 * Minimal static-SVG scene builder: axes, polylines, markers, legend,
 * and an embedded metadata block.  Vector output only; no interactivity.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  dash?: string;
}

export interface Marker {
  x: number;
  y: number;
  label: string;
}

export interface AxisSpec {
  label: string;
  log?: boolean;
}

export interface FigureSpec {
  title: string;
  xAxis: AxisSpec;
  yAxis: AxisSpec;
  series: Series[];
  markers?: Marker[];
  /** Horizontal reference lines in data coordinates. */
  refLinesY?: number[];
  /** Fixed y range (data coordinates); autoscaled when omitted. */
  yRange?: [number, number];
  metadata: Record<string, unknown>;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  const n = 5;
  f.ticks = Array.from({ length: n + 1 }, (_, i) => lo + ((hi - lo) * i) / n);
  return f;
}

function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((v: number) =>
    outLo + ((Math.log10(v) - llo) / (lhi - llo || 1)) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  if (ticks.length < 2) f.ticks = [lo, hi];
  else f.ticks = ticks;
  return f;
}

function extent(values: number[], log: boolean): [number, number] {
  const ok = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  if (ok.length === 0) return log ? [1e-3, 1] : [0, 1];
  let lo = Math.min(...ok);
  let hi = Math.max(...ok);
  if (log) {
    lo /= 1.5;
    hi *= 1.5;
  } else {
    const pad = (hi - lo || 1) * 0.05;
    lo -= pad;
    hi += pad;
  }
  return [lo, hi];
}

export function renderFigure(spec: FigureSpec): string {
  const xLog = spec.xAxis.log ?? false;
  const yLog = spec.yAxis.log ?? false;
  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y).concat(spec.refLinesY ?? []);
  const [xLo, xHi] = extent(xs, xLog);
  const [yLo, yHi] = spec.yRange ?? extent(ys, yLog);

  const sx = (xLog ? logScale : linearScale)(xLo, xHi, MARGIN.left, MARGIN.left + PLOT_W);
  const sy = (yLog ? logScale : linearScale)(yLo, yHi, MARGIN.top + PLOT_H, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(
    `<metadata id="plot-data">${esc(JSON.stringify(spec.metadata))}</metadata>`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${esc(spec.title)}</text>`,
  );

  // frame and ticks
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + PLOT_H;
  parts.push(
    `<rect x="${x0}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="#333"/>`,
  );
  for (const t of sx.ticks) {
    const px = sx(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">${esc(fmtTick(t))}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const py = sy(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${esc(fmtTick(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${esc(spec.xAxis.label)}</text>`,
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${MARGIN.top + PLOT_H / 2})">${esc(spec.yAxis.label)}</text>`,
  );

  for (const ref of spec.refLinesY ?? []) {
    const py = sy(ref);
    parts.push(
      `<line x1="${x0}" y1="${py}" x2="${x0 + PLOT_W}" y2="${py}" stroke="#999" stroke-dasharray="6 4"/>`,
    );
  }

  spec.series.forEach((s) => {
    const pts = s.x
      .map((x, i) => [x, s.y[i]] as const)
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y) && (!yLog || y > 0) && (!xLog || x > 0))
      .map(([x, y]) => `${sx(x).toFixed(2)},${sy(y).toFixed(2)}`)
      .join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.6"${dash}/>`,
    );
  });

  for (const m of spec.markers ?? []) {
    const px = sx(m.x);
    const py = sy(m.y);
    parts.push(`<circle cx="${px}" cy="${py}" r="4" fill="none" stroke="#000"/>`);
    parts.push(
      `<text x="${px + 8}" y="${py - 8}" font-size="11">${esc(m.label)}</text>`,
    );
  }

  // legend
  const lx = MARGIN.left + 10;
  let ly = MARGIN.top + 14;
  for (const s of spec.series) {
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${s.color}" stroke-width="1.6"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
    );
    parts.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(s.label)}</text>`);
    ly += 15;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export function extractMetadata(svg: string): Record<string, unknown> {
  const match = /<metadata id="plot-data">(.*?)<\/metadata>/s.exec(svg);
  if (!match) throw new Error("no plot-data metadata block in SVG");
  const raw = match[1]
    .replace(/&quot;/g, '"')
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(raw) as Record<string, unknown>;
}
