/**
 * Checksum of the exact CSV cells a figure consumed.
 *
 * Canonical form, per consumed table: the source schema line, the consumed
 * column names joined by commas, then one line per row with those columns'
 * raw cell strings joined by commas; tables are concatenated in plot order
 * separated by a blank line.  The sha256 of that text is embedded in the
 * SVG metadata, so any figure can be audited against its inputs without
 * re-deriving a single number.
 */

import { createHash } from "node:crypto";

import { columnIndex, type CsvTable } from "./csv.js";

export interface ConsumedCells {
  table: CsvTable;
  columns: string[];
}

export function canonicalCellText(consumed: ConsumedCells[]): string {
  const blocks = consumed.map(({ table, columns }) => {
    const indices = columns.map((c) => columnIndex(table, c));
    const lines = [`# schema: ${table.schema}`, columns.join(",")];
    for (const row of table.rows) {
      lines.push(indices.map((i) => row[i]).join(","));
    }
    return lines.join("\n");
  });
  return blocks.join("\n\n");
}

export function cellChecksum(consumed: ConsumedCells[]): string {
  return "sha256:" + createHash("sha256").update(canonicalCellText(consumed), "utf8").digest("hex");
}
