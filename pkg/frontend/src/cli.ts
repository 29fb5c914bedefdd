#!/usr/bin/env node
/**
 * plot_sweeps <csv> --group-by L|T|snr --out <path> [--linear-y] [--svg]
 */

import { SchemaError } from "./csv";
import { FigureSpec, GroupBy } from "./figure";
import { render } from "./render";

const USAGE =
  "usage: plot_sweeps <csv> --group-by L|T|snr --out <path> [--linear-y] [--svg]";

export function parseArgs(argv: string[]): FigureSpec {
  let csvPath: string | null = null;
  let groupBy: GroupBy | null = null;
  let outPath: string | null = null;
  let logY = true;
  let svg = false;
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg === "--group-by") {
      const value = argv[++i];
      if (value !== "L" && value !== "T" && value !== "snr") {
        throw new Error(`--group-by must be one of L|T|snr, got '${value}'`);
      }
      groupBy = value;
    } else if (arg === "--out") {
      outPath = argv[++i];
    } else if (arg === "--linear-y") {
      logY = false;
    } else if (arg === "--svg") {
      svg = true;
    } else if (arg.startsWith("--")) {
      throw new Error(`unknown option '${arg}'\n${USAGE}`);
    } else if (csvPath === null) {
      csvPath = arg;
    } else {
      throw new Error(`unexpected argument '${arg}'\n${USAGE}`);
    }
  }
  if (!csvPath || !groupBy || !outPath) {
    throw new Error(USAGE);
  }
  return { csvPath, groupBy, outPath, logX: true, logY, svg };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    render(spec);
    console.log(`wrote ${spec.outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
