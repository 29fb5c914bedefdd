import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { describe, expect, it } from "vitest";

import { SchemaError, readSweepRows } from "../src/csv";
import { buildPanels } from "../src/figure";
import { parseArgs, main } from "../src/cli";
import { renderSvg } from "../src/svg";
import { renderToSvgString } from "../src/render";

const FIXTURES = path.join(__dirname, "fixtures");
const FIG1 = path.join(FIXTURES, "fig1_small.csv");

const count = (haystack: string, needle: string) =>
  haystack.split(needle).length - 1;

describe("csv parsing", () => {
  it("reads the real sweep schema", () => {
    const rows = readSweepRows(fs.readFileSync(FIG1, "utf8"));
    expect(rows.length).toBe(12);
    expect(rows[0].method).toBe("direct");
    expect(rows[0].L).toBeNull();
    expect(rows[1].L).toBe(2);
    expect(rows[0].N).toBe(20);
  });

  it("rejects a missing column by name", () => {
    const text = "sweep_name,method,L,T,N,snr,ci_low,ci_high\nN,direct,,5,20,1,0,1\n";
    expect(() => readSweepRows(text)).toThrowError(/missing column: 'mean_gap'/);
  });

  it("rejects non-numeric cells by column name", () => {
    const text =
      "sweep_name,method,L,T,N,snr,mean_gap,ci_low,ci_high\n" +
      "N,direct,,5,20,1,notanumber,0.4,0.6\n";
    expect(() => readSweepRows(text)).toThrowError(/column 'mean_gap'/);
    expect(() => readSweepRows(text)).toThrowError(SchemaError);
  });

  it("handles quoted cells", () => {
    const rows = readSweepRows(
      'sweep_name,method,L,T,N,snr,mean_gap,ci_low,ci_high\n"N","direct",,5,20,1,0.5,0.4,0.6\n'
    );
    expect(rows[0].sweep_name).toBe("N");
  });
});

describe("panel construction", () => {
  it("groups fig1 by L with the direct curve in every panel", () => {
    const rows = readSweepRows(fs.readFileSync(FIG1, "utf8"));
    const panels = buildPanels(rows, "L");
    expect(panels.map((p) => p.title)).toEqual(["L = 2", "L = 3", "L = 4"]);
    for (const panel of panels) {
      expect(panel.series.map((s) => s.label)).toEqual(["direct", "indirect"]);
      for (const s of panel.series) {
        expect(s.points.map((p) => p.x)).toEqual([20, 100, 500]);
      }
    }
  });

  it("groups fig2 by T and fig3 by snr", () => {
    const fig2 = readSweepRows(
      fs.readFileSync(path.join(FIXTURES, "fig2_small.csv"), "utf8")
    );
    expect(buildPanels(fig2, "T").map((p) => p.title)).toEqual([
      "T = 4",
      "T = 5",
      "T = 6",
    ]);
    const fig3 = readSweepRows(
      fs.readFileSync(path.join(FIXTURES, "fig3_small.csv"), "utf8")
    );
    const panels = buildPanels(fig3, "snr");
    expect(panels.length).toBe(3);
    expect(panels[0].title).toContain("0.3333");
  });

  it("raises a named error when the group column carries no values", () => {
    const rows = readSweepRows(
      "sweep_name,method,L,T,N,snr,mean_gap,ci_low,ci_high\nN,direct,,5,20,1,0.5,0.4,0.6\n"
    );
    expect(() => buildPanels(rows, "L")).toThrowError(/group column 'L'/);
  });
});

describe("svg rendering", () => {
  const spec = {
    csvPath: FIG1,
    groupBy: "L" as const,
    outPath: "unused.png",
    logX: true,
    logY: true,
    svg: true,
  };

  it("renders three panels with two mean curves and two bands each", () => {
    const svg = renderToSvgString(spec, () => {});
    expect(count(svg, '<g class="panel">')).toBe(3);
    expect(count(svg, 'class="mean"')).toBe(6);
    expect(count(svg, 'class="band"')).toBe(6);
  });

  it("is a pure function of the CSV", () => {
    const a = renderToSvgString(spec, () => {});
    const b = renderToSvgString(spec, () => {});
    expect(a).toBe(b);
  });

  it("warns and floors non-positive values on a log axis", () => {
    const warnings: string[] = [];
    const svg = renderToSvgString(spec, (m) => warnings.push(m));
    // the fixture contains a negative ci_low, so the floor rule must fire
    expect(warnings.length).toBe(1);
    expect(warnings[0]).toMatch(/log-axis floor/);
    expect(svg).toContain("<svg");
  });

  it("clamps bands at zero on a linear axis", () => {
    const rows = readSweepRows(fs.readFileSync(FIG1, "utf8"));
    const panels = buildPanels(rows, "L");
    const svg = renderSvg(panels, { logX: true, logY: false, warn: () => {} });
    const ys = Array.from(svg.matchAll(/<polygon class="band" points="([^"]+)"/g))
      .flatMap((m) => m[1].split(" "))
      .map((pair) => Number(pair.split(",")[1]));
    // panel bottom (y pixel of value 0) is at 34 + 300; nothing may dip below
    for (const y of ys) {
      expect(y).toBeLessThanOrEqual(334 + 1e-6);
    }
  });

  it("renders a single-point sweep without crashing", () => {
    const svg = renderToSvgString(
      {
        csvPath: path.join(FIXTURES, "single_point.csv"),
        groupBy: "L",
        outPath: "unused.svg",
        logX: true,
        logY: true,
        svg: true,
      },
      () => {}
    );
    expect(count(svg, '<g class="panel">')).toBe(1);
    expect(count(svg, "<circle")).toBeGreaterThan(0);
  });
});

describe("cli", () => {
  it("parses the documented flags", () => {
    const spec = parseArgs(["a.csv", "--group-by", "snr", "--out", "x.png", "--linear-y"]);
    expect(spec).toEqual({
      csvPath: "a.csv",
      groupBy: "snr",
      outPath: "x.png",
      logX: true,
      logY: false,
      svg: false,
    });
  });

  it("rejects a bad group column", () => {
    expect(() => parseArgs(["a.csv", "--group-by", "Q", "--out", "x.png"])).toThrowError(
      /L\|T\|snr/
    );
  });

  it("writes an SVG end to end", () => {
    const out = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "plots-")), "fig1.svg");
    const code = main([FIG1, "--group-by", "L", "--out", out, "--svg"]);
    expect(code).toBe(0);
    expect(fs.readFileSync(out, "utf8")).toContain('<g class="panel">');
  });

  it("writes a PNG end to end", () => {
    const out = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "plots-")), "fig1.png");
    const code = main([FIG1, "--group-by", "L", "--out", out]);
    expect(code).toBe(0);
    const bytes = fs.readFileSync(out);
    expect(bytes.subarray(1, 4).toString()).toBe("PNG");
    expect(bytes.length).toBeGreaterThan(10_000);
  });

  it("fails with a named-column schema error and exit code 1", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
    const bad = path.join(dir, "bad.csv");
    fs.writeFileSync(bad, "sweep_name,method,T,N,snr,mean_gap,ci_low,ci_high\n");
    const errors: string[] = [];
    const original = console.error;
    console.error = (m: string) => errors.push(String(m));
    try {
      const code = main([bad, "--group-by", "L", "--out", path.join(dir, "x.png")]);
      expect(code).toBe(1);
    } finally {
      console.error = original;
    }
    expect(errors.join("\n")).toMatch(/missing column: 'L'/);
  });
});
