/**
 * Minimal RFC-4180-style CSV reading plus schema checks for sweep results.
 */

export interface SweepRow {
  sweep_name: string;
  method: string;
  /** group columns; L is null for direct-method rows */
  L: number | null;
  T: number;
  N: number;
  snr: number;
  mean_gap: number;
  ci_low: number;
  ci_high: number;
}

export class SchemaError extends Error {}

export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let cell = "";
  let inQuotes = false;
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          cell += '"';
          i += 1;
        } else {
          inQuotes = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch === '"') {
      inQuotes = true;
    } else if (ch === ",") {
      row.push(cell);
      cell = "";
    } else if (ch === "\n" || ch === "\r") {
      if (ch === "\r" && text[i + 1] === "\n") i += 1;
      row.push(cell);
      rows.push(row);
      row = [];
      cell = "";
    } else {
      cell += ch;
    }
    i += 1;
  }
  if (cell.length > 0 || row.length > 0) {
    row.push(cell);
    rows.push(row);
  }
  return rows.filter((r) => !(r.length === 1 && r[0] === ""));
}

const REQUIRED_COLUMNS = [
  "sweep_name",
  "method",
  "L",
  "T",
  "N",
  "snr",
  "mean_gap",
  "ci_low",
  "ci_high",
] as const;

function toNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: column '${column}' is not numeric: '${raw}'`);
  }
  return value;
}

/** Parse a sweep CSV, failing with a named-column error on bad schema. */
export function readSweepRows(text: string): SweepRow[] {
  const table = parseCsv(text);
  if (table.length === 0) throw new SchemaError("empty CSV");
  const header = table[0];
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new SchemaError(`missing column: '${column}'`);
    }
  }
  const get = (row: string[], column: string) => row[index.get(column)!] ?? "";
  return table.slice(1).map((row, k) => {
    const line = k + 2;
    const lRaw = get(row, "L").trim();
    return {
      sweep_name: get(row, "sweep_name"),
      method: get(row, "method"),
      L: lRaw === "" ? null : toNumber(lRaw, "L", line),
      T: toNumber(get(row, "T"), "T", line),
      N: toNumber(get(row, "N"), "N", line),
      snr: toNumber(get(row, "snr"), "snr", line),
      mean_gap: toNumber(get(row, "mean_gap"), "mean_gap", line),
      ci_low: toNumber(get(row, "ci_low"), "ci_low", line),
      ci_high: toNumber(get(row, "ci_high"), "ci_high", line),
    };
  });
}
