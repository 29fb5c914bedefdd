/**
 * File-level rendering: CSV in, SVG or 150-dpi PNG out.
 */

import * as fs from "fs";

import { readSweepRows } from "./csv";
import { FigureSpec, buildPanels } from "./figure";
import { renderSvg } from "./svg";

/** SVG is designed at CSS pixel density (96/in); PNG targets 150 dpi. */
const PNG_SCALE = 150 / 96;

export function renderToSvgString(spec: FigureSpec, warn?: (m: string) => void): string {
  const rows = readSweepRows(fs.readFileSync(spec.csvPath, "utf8"));
  const panels = buildPanels(rows, spec.groupBy);
  return renderSvg(panels, {
    logX: spec.logX,
    logY: spec.logY,
    title: `mean suboptimality gap by ${spec.groupBy}`,
    warn,
  });
}

export function render(spec: FigureSpec, warn?: (m: string) => void): void {
  const svg = renderToSvgString(spec, warn);
  if (spec.svg) {
    fs.writeFileSync(spec.outPath, svg);
    return;
  }
  // lazy import so SVG output works even without the native rasterizer
  const { Resvg } = require("@resvg/resvg-js");
  const widthMatch = svg.match(/width="(\d+)"/);
  const designWidth = widthMatch ? Number(widthMatch[1]) : 1000;
  const renderer = new Resvg(svg, {
    fitTo: { mode: "width" as const, value: Math.round(designWidth * PNG_SCALE) },
    background: "white",
  });
  fs.writeFileSync(spec.outPath, renderer.render().asPng());
}
