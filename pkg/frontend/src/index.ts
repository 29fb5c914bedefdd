export { parseCsv, readSweepRows, SchemaError } from "./csv";
export type { SweepRow } from "./csv";
export { buildPanels } from "./figure";
export type { FigureSpec, GroupBy, Panel, Series, SeriesPoint } from "./figure";
export { renderSvg } from "./svg";
export { render, renderToSvgString } from "./render";
