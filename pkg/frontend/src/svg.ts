/**
 * Self-contained SVG assembly for the grouped-panel gap figures: log/linear
 * scales, decade ticks, mean polylines and shaded confidence bands.
 * Rendering is a pure function of its inputs, so identical data yields an
 * identical document.
 */

import { Panel, SeriesPoint } from "./figure";

export interface Axes {
  logX: boolean;
  logY: boolean;
}

const PANEL_W = 320;
const PANEL_H = 300;
const MARGIN = { top: 34, right: 14, bottom: 46, left: 64 };
const GAP_BETWEEN = 18;

interface Scale {
  (v: number): number;
  floorValue: number;
}

function makeScale(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
  log: boolean
): Scale {
  const a = log ? Math.log10(lo) : lo;
  const b = log ? Math.log10(hi) : hi;
  const span = b - a || 1;
  const fn = ((v: number) => {
    const t = ((log ? Math.log10(v) : v) - a) / span;
    return rangeLo + t * (rangeHi - rangeLo);
  }) as Scale;
  fn.floorValue = lo;
  return fn;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e += 1) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function linearTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    ticks.push(v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const e = Math.log10(Math.abs(v));
  if (e >= 5 || e < -3) {
    return v.toExponential(0).replace("+", "");
  }
  return Number.isInteger(v) ? String(v) : String(Number(v.toPrecision(3)));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface RenderOptions extends Axes {
  title?: string;
  warn?: (message: string) => void;
}

/** Collect finite positive (for log) plotting extents across all panels. */
function extents(panels: Panel[], axes: Axes, warn: (m: string) => void) {
  let xs: number[] = [];
  let ys: number[] = [];
  for (const panel of panels) {
    for (const s of panel.series) {
      for (const p of s.points) {
        xs.push(p.x);
        ys.push(p.mean, p.lo, p.hi);
      }
    }
  }
  if (axes.logY) {
    const positives = ys.filter((v) => v > 0);
    if (positives.length < ys.length) {
      warn(
        `plot_sweeps: ${ys.length - positives.length} value(s) <= 0 mapped to the log-axis floor`
      );
    }
    ys = positives.length > 0 ? positives : [1e-12, 1];
  } else {
    // bands never extend below zero on a linear axis
    ys = ys.map((v) => Math.max(v, 0));
  }
  if (axes.logX) xs = xs.filter((v) => v > 0);
  const pad = (lo: number, hi: number, log: boolean): [number, number] => {
    if (log) return [lo / 1.35, hi * 1.35];
    const span = hi - lo || Math.abs(hi) || 1;
    return [Math.max(0, lo - 0.06 * span), hi + 0.06 * span];
  };
  const [xlo, xhi] = pad(Math.min(...xs), Math.max(...xs), axes.logX);
  const [ylo, yhi] = pad(Math.min(...ys), Math.max(...ys), axes.logY);
  return { xlo, xhi, ylo, yhi };
}

function pathFrom(points: string[]): string {
  return points.join(" ");
}

function seriesGeometry(
  points: SeriesPoint[],
  sx: Scale,
  sy: Scale,
  axes: Axes
): { line: string; band: string } {
  const clampY = (v: number) => {
    if (axes.logY) return Math.max(v, sy.floorValue);
    return Math.max(v, 0);
  };
  const lineCoords = points.map(
    (p) => `${sx(p.x).toFixed(2)},${sy(clampY(p.mean)).toFixed(2)}`
  );
  const upper = points.map((p) => `${sx(p.x).toFixed(2)},${sy(clampY(p.hi)).toFixed(2)}`);
  const lower = [...points]
    .reverse()
    .map((p) => `${sx(p.x).toFixed(2)},${sy(clampY(p.lo)).toFixed(2)}`);
  return { line: pathFrom(lineCoords), band: pathFrom([...upper, ...lower]) };
}

export function renderSvg(panels: Panel[], options: RenderOptions): string {
  const warn = options.warn ?? ((m) => console.warn(m));
  const { xlo, xhi, ylo, yhi } = extents(panels, options, warn);
  const width =
    MARGIN.left + panels.length * PANEL_W + (panels.length - 1) * GAP_BETWEEN + MARGIN.right;
  const height = MARGIN.top + PANEL_H + MARGIN.bottom;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (options.title) {
    parts.push(
      `<text x="${width / 2}" y="16" text-anchor="middle" font-size="14">${esc(options.title)}</text>`
    );
  }

  panels.forEach((panel, pi) => {
    const x0 = MARGIN.left + pi * (PANEL_W + GAP_BETWEEN);
    const y0 = MARGIN.top;
    const sx = makeScale(xlo, xhi, x0, x0 + PANEL_W, options.logX);
    const sy = makeScale(ylo, yhi, y0 + PANEL_H, y0, options.logY);
    parts.push(`<g class="panel">`);
    parts.push(
      `<rect x="${x0}" y="${y0}" width="${PANEL_W}" height="${PANEL_H}" fill="none" stroke="#444"/>`
    );
    parts.push(
      `<text x="${x0 + PANEL_W / 2}" y="${y0 - 8}" text-anchor="middle" font-size="13">${esc(panel.title)}</text>`
    );

    const xticks = options.logX ? decadeTicks(xlo, xhi) : linearTicks(xlo, xhi);
    for (const t of xticks) {
      const px = sx(t);
      parts.push(
        `<line x1="${px.toFixed(2)}" y1="${y0 + PANEL_H}" x2="${px.toFixed(2)}" y2="${y0 + PANEL_H + 5}" stroke="#444"/>`
      );
      parts.push(
        `<text x="${px.toFixed(2)}" y="${y0 + PANEL_H + 18}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`
      );
    }
    const yticks = options.logY ? decadeTicks(ylo, yhi) : linearTicks(ylo, yhi);
    for (const t of yticks) {
      const py = sy(t);
      parts.push(
        `<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#444"/>`
      );
      if (pi === 0) {
        parts.push(
          `<text x="${x0 - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="11">${fmtTick(t)}</text>`
        );
      }
      parts.push(
        `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x0 + PANEL_W}" y2="${py.toFixed(2)}" stroke="#ddd" stroke-width="0.5"/>`
      );
    }

    for (const s of panel.series) {
      const { line, band } = seriesGeometry(s.points, sx, sy, options);
      parts.push(
        `<polygon class="band" points="${band}" fill="${s.color}" fill-opacity="0.18" stroke="none"/>`
      );
      parts.push(
        `<polyline class="mean" points="${line}" fill="none" stroke="${s.color}" stroke-width="1.8"/>`
      );
      for (const coord of line.split(" ")) {
        const [cx, cy] = coord.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="2.4" fill="${s.color}"/>`);
      }
    }

    // legend, top-right of each panel
    panel.series.forEach((s, si) => {
      const lx = x0 + PANEL_W - 128;
      const ly = y0 + 14 + si * 16;
      parts.push(
        `<line x1="${lx}" y1="${ly}" x2="${lx + 20}" y2="${ly}" stroke="${s.color}" stroke-width="2"/>`
      );
      parts.push(
        `<text x="${lx + 25}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`
      );
    });

    parts.push(
      `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H + 36}" text-anchor="middle" font-size="12">dataset size N</text>`
    );
    parts.push(`</g>`);
  });

  parts.push(
    `<text x="14" y="${MARGIN.top + PANEL_H / 2}" transform="rotate(-90 14 ${MARGIN.top + PANEL_H / 2})" ` +
      `text-anchor="middle" font-size="12">mean suboptimality gap</text>`
  );
  parts.push(`</svg>`);
  return parts.join("\n");
}
