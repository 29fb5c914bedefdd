/**
 * Turn sweep rows into the panel/series structure of the figures:
 * one panel per group value, one mean line plus confidence band per
 * (method, model order) series, x axis = dataset size.
 */

import { SchemaError, SweepRow } from "./csv";

export type GroupBy = "L" | "T" | "snr";

export interface FigureSpec {
  csvPath: string;
  groupBy: GroupBy;
  outPath: string;
  logX: boolean;
  logY: boolean;
  svg: boolean;
}

export interface SeriesPoint {
  x: number;
  mean: number;
  lo: number;
  hi: number;
}

export interface Series {
  label: string;
  color: string;
  points: SeriesPoint[];
}

export interface Panel {
  title: string;
  series: Series[];
}

const DIRECT_COLOR = "#1f77b4";
const INDIRECT_COLORS = ["#d62728", "#ff7f0e", "#9467bd", "#8c564b"];

function groupValue(row: SweepRow, groupBy: GroupBy): number | null {
  if (groupBy === "L") return row.L;
  if (groupBy === "T") return row.T;
  return row.snr;
}

function formatValue(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return value.toPrecision(4);
}

function buildSeries(rows: SweepRow[], label: string, color: string): Series {
  const points = rows
    .map((r) => ({ x: r.N, mean: r.mean_gap, lo: r.ci_low, hi: r.ci_high }))
    .sort((a, b) => a.x - b.x);
  return { label, color, points };
}

/** Group rows into panels; direct rows join every panel when grouping by L. */
export function buildPanels(rows: SweepRow[], groupBy: GroupBy): Panel[] {
  if (rows.length === 0) throw new SchemaError("CSV has a header but no data rows");
  const values = Array.from(
    new Set(
      rows
        .map((r) => groupValue(r, groupBy))
        .filter((v): v is number => v !== null)
    )
  ).sort((a, b) => a - b);
  if (values.length === 0) {
    throw new SchemaError(`no rows carry a value in the group column '${groupBy}'`);
  }
  return values.map((value) => {
    const inPanel = rows.filter((r) => {
      const v = groupValue(r, groupBy);
      if (v === null) return groupBy === "L" && r.method === "direct";
      return v === value;
    });
    const series: Series[] = [];
    const direct = inPanel.filter((r) => r.method === "direct");
    if (direct.length > 0) series.push(buildSeries(direct, "direct", DIRECT_COLOR));
    const indirectOrders = Array.from(
      new Set(
        inPanel.filter((r) => r.method === "indirect").map((r) => r.L ?? NaN)
      )
    ).sort((a, b) => a - b);
    indirectOrders.forEach((order, i) => {
      const subset = inPanel.filter((r) => r.method === "indirect" && (r.L ?? NaN) === order);
      const label =
        groupBy === "L" || Number.isNaN(order) ? "indirect" : `indirect (L=${order})`;
      series.push(buildSeries(subset, label, INDIRECT_COLORS[i % INDIRECT_COLORS.length]));
    });
    return { title: `${groupBy} = ${formatValue(value)}`, series };
  });
}
