// Render the two coefficient panels from a sweep CSV.
// Pure presentation: every plotted number comes from the file verbatim.

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";

import { argmaxGammaH, parseSweepCsv, SchemaError, SweepRow } from "./csv.js";
import { fmtValue, renderPanel } from "./svg.js";

const X_LABEL = "x = exp(-βω)";

export function renderFig2(rows: SweepRow[]): { fig2a: string; fig2b: string } {
  const xs = rows.map((r) => r.x);
  const peak = argmaxGammaH(rows);
  const fig2a = renderPanel(
    {
      xLabel: X_LABEL,
      yLabel: "γ_H",
      series: [
        { label: "γ_H", xs, ys: rows.map((r) => r.gammaH), color: "#1f77b4", markers: true },
      ],
      annotation:
        peak >= 0
          ? {
              x: rows[peak].x,
              y: rows[peak].gammaH,
              text: `peak γ_H = ${fmtValue(rows[peak].gammaH)} at x = ${fmtValue(rows[peak].x)}`,
            }
          : undefined,
    },
    {
      xLabel: X_LABEL,
      yLabel: "-ΔS_s",
      series: [
        { label: "-ΔS_s", xs, ys: rows.map((r) => -r.dSs), color: "#2c3e50", markers: true },
      ],
    },
  );
  const fig2b = renderPanel(
    {
      xLabel: X_LABEL,
      yLabel: "γ_E",
      series: [
        { label: "γ_E", xs, ys: rows.map((r) => r.gammaE), color: "#d62728", markers: true },
      ],
    },
    {
      xLabel: X_LABEL,
      yLabel: "nats",
      series: [
        { label: "I(s:e)", xs, ys: rows.map((r) => r.Ise), color: "#2c3e50", markers: true },
        { label: "Δ'I(s:e)", xs, ys: rows.map((r) => r.dI), color: "#8e44ad", dash: "4 3", markers: true },
      ],
    },
  );
  return { fig2a, fig2b };
}

export function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: plot_fig2 <sweep.csv> <out-dir>");
    return 2;
  }
  const [csvPath, outDir] = argv;
  let text: string;
  try {
    text = readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`${csvPath}: ${(err as Error).message}`);
    return 1;
  }
  let rows: SweepRow[];
  try {
    rows = parseSweepCsv(text);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`${csvPath}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  if (rows.length === 0) {
    console.error(`${csvPath}: no data rows`);
    return 1;
  }
  const { fig2a, fig2b } = renderFig2(rows);
  mkdirSync(outDir, { recursive: true });
  for (const [name, svg] of [["fig2a.svg", fig2a], ["fig2b.svg", fig2b]] as const) {
    const dest = join(outDir, name);
    writeFileSync(dest, svg);
    console.log(`wrote ${dest}`);
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
