/**
 * Standalone figure renderer:
 *
 *   node dist/cli.js --kind decay --in run1.csv [--in run2.csv ...] --out fig.svg
 *   node dist/cli.js --kind sweep --in sweep.csv --out sweep.svg
 *   node dist/cli.js --kind convergence --in conv.csv --out conv.svg
 *
 * Reads only the documented CSV schemas and refuses anything else.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv } from "./csv.js";
import { buildFigure, type FigureKind } from "./plots.js";

interface Args {
  inputs: string[];
  out: string;
  kind: FigureKind;
}

export function parseArgs(argv: string[]): Args {
  const inputs: string[] = [];
  let out: string | undefined;
  let kind: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    switch (flag) {
      case "--in":
        if (value === undefined) throw new Error("--in needs a path");
        inputs.push(value);
        i++;
        break;
      case "--out":
        if (value === undefined) throw new Error("--out needs a path");
        out = value;
        i++;
        break;
      case "--kind":
        if (value === undefined) throw new Error("--kind needs a value");
        kind = value;
        i++;
        break;
      default:
        throw new Error(`unknown argument '${flag}'`);
    }
  }
  if (inputs.length === 0) throw new Error("at least one --in is required");
  if (!out) throw new Error("--out is required");
  if (kind !== "decay" && kind !== "sweep" && kind !== "convergence") {
    throw new Error("--kind must be decay, sweep, or convergence");
  }
  return { inputs, out, kind };
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const tables = args.inputs.map((path) =>
      parseCsv(readFileSync(path, "utf8"), path),
    );
    const svg = buildFigure({ kind: args.kind, tables });
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(run(process.argv.slice(2)));
}
