/**
 * Strict reader for starkdecay CSV outputs.
 *
 * Files start with a `# schema: <name>/<version>` line, then an optional
 * `# params: k=v ...` line, then the header row and plain numeric rows
 * (no quoting).  Raw cell strings are kept verbatim so checksums are
 * computed over exactly what the file says, independent of float parsing.
 */

export const TIMESERIES_SCHEMA = "qsde-timeseries/1";
export const SWEEP_SCHEMA = "qsde-sweep/1";
export const CONVERGENCE_SCHEMA = "qsde-convergence/1";

export const SUPPORTED_SCHEMAS: ReadonlySet<string> = new Set([
  TIMESERIES_SCHEMA,
  SWEEP_SCHEMA,
  CONVERGENCE_SCHEMA,
]);

export class SchemaError extends Error {}

export interface CsvTable {
  schema: string;
  params: Record<string, string>;
  header: string[];
  /** Raw cell strings, row-major, aligned with `header`. */
  rows: string[][];
  source: string;
}

export function parseCsv(text: string, source = "<csv>"): CsvTable {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty input`);
  }
  const schemaMatch = /^# schema: (.+)$/.exec(lines[0]);
  if (!schemaMatch) {
    throw new SchemaError(`${source}: missing '# schema:' header line`);
  }
  const schema = schemaMatch[1].trim();
  if (!SUPPORTED_SCHEMAS.has(schema)) {
    throw new SchemaError(
      `${source}: unsupported schema version '${schema}'; supported: ${[...SUPPORTED_SCHEMAS].join(", ")}`,
    );
  }

  const params: Record<string, string> = {};
  let i = 1;
  for (; i < lines.length && lines[i].startsWith("#"); i++) {
    const paramsMatch = /^# params: (.+)$/.exec(lines[i]);
    if (paramsMatch) {
      for (const chunk of paramsMatch[1].trim().split(/\s+/)) {
        const eq = chunk.indexOf("=");
        if (eq > 0) params[chunk.slice(0, eq)] = chunk.slice(eq + 1);
      }
    }
  }
  if (i >= lines.length) {
    throw new SchemaError(`${source}: missing header row`);
  }
  const header = lines[i].split(",");
  const rows: string[][] = [];
  for (i += 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${source}: row ${rows.length + 1} has ${cells.length} cells, expected ${header.length}`,
      );
    }
    rows.push(cells);
  }
  return { schema, params, header, rows, source };
}

export function requireSchema(table: CsvTable, expected: string): void {
  if (table.schema !== expected) {
    throw new SchemaError(
      `${table.source}: schema '${table.schema}' is not '${expected}'`,
    );
  }
}

export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`${table.source}: missing column '${name}'`);
  }
  return idx;
}

export function column(table: CsvTable, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, r) => {
    const v = Number(row[idx]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(
        `${table.source}: non-numeric cell '${row[idx]}' in column '${name}', row ${r + 1}`,
      );
    }
    return v;
  });
}

export function hasColumn(table: CsvTable, name: string): boolean {
  return table.header.includes(name);
}
