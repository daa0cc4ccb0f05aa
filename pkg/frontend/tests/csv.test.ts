import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { argmaxGammaH, parseSweepCsv, SchemaError } from "../src/csv.js";

const golden = readFileSync(join(__dirname, "fixtures", "sweep.csv"), "utf8");

describe("parseSweepCsv", () => {
  it("parses the golden sweep verbatim", () => {
    const rows = parseSweepCsv(golden);
    expect(rows).toHaveLength(7);
    expect(rows[0].x).toBe(0.25);
    expect(rows[0].gammaH).toBe(0.140345757663);
    expect(rows[0].dSs).toBe(-0.254428009079);
    expect(rows[6].bestDv).toBe(3);
    expect(rows[3].gammaE).toBe(0.33298713245);
  });

  it("matches columns by name, not position", () => {
    const lines = golden.trim().split("\n");
    const header = lines[0].split(",");
    const order = [...header.keys()].reverse();
    const shuffled = [
      order.map((i) => header[i]).join(","),
      ...lines.slice(1).map((l) => {
        const parts = l.split(",");
        return order.map((i) => parts[i]).join(",");
      }),
    ].join("\n");
    expect(parseSweepCsv(shuffled)).toEqual(parseSweepCsv(golden));
  });

  it("names the missing column", () => {
    const broken = golden.replace("gamma_E", "gamma_X");
    expect(() => parseSweepCsv(broken)).toThrow(SchemaError);
    expect(() => parseSweepCsv(broken)).toThrow(/missing column gamma_E/);
  });

  it("returns no rows for a header-only file", () => {
    const headerOnly = golden.trim().split("\n")[0] + "\n";
    expect(parseSweepCsv(headerOnly)).toEqual([]);
  });

  it("rejects a file with no header at all", () => {
    expect(() => parseSweepCsv("# only a comment\n\n")).toThrow(/no header/);
  });

  it("skips comments and blank lines anywhere", () => {
    const lines = golden.trim().split("\n");
    const padded = [
      "# generated somewhere",
      "",
      lines[0],
      lines[1],
      "   ",
      "# mid-file note",
      ...lines.slice(2),
    ].join("\n");
    expect(parseSweepCsv(padded)).toEqual(parseSweepCsv(golden));
  });

  it("reports the physical line of a short row", () => {
    const lines = golden.trim().split("\n");
    const broken = [lines[0], lines[1], "0.3,-0.2"].join("\n");
    expect(() => parseSweepCsv(broken)).toThrow(/line 3: expected 10 fields/);
  });

  it("rejects non-numeric fields but accepts nan", () => {
    const lines = golden.trim().split("\n");
    const bad = [lines[0], lines[1].replace("0.140345757663", "oops")].join("\n");
    expect(() => parseSweepCsv(bad)).toThrow(/line 2: gamma_H is not a number: oops/);
    const withNan = [lines[0], lines[1].replace("0.140345757663", "nan")].join("\n");
    const rows = parseSweepCsv(withNan);
    expect(Number.isNaN(rows[0].gammaH)).toBe(true);
  });
});

describe("argmaxGammaH", () => {
  it("finds the peak row of the golden sweep", () => {
    const rows = parseSweepCsv(golden);
    const i = argmaxGammaH(rows);
    expect(rows[i].x).toBe(0.4);
    expect(rows[i].gammaH).toBe(0.168397070606);
  });

  it("skips non-finite entries and handles the empty case", () => {
    const rows = parseSweepCsv(golden);
    rows[3].gammaH = NaN;
    expect(argmaxGammaH(rows)).toBe(4);
    expect(argmaxGammaH([])).toBe(-1);
  });
});
