export const REQUIRED_COLUMNS = [
  "x_exp_minus_beta_omega",
  "dSs",
  "Qe",
  "Ise",
  "gamma_H",
  "gamma_E",
  "dI",
  "best_dv",
  "t",
  "coherence_diag",
] as const;

export class SchemaError extends Error {}

export interface SweepRow {
  x: number;
  dSs: number;
  Qe: number;
  Ise: number;
  gammaH: number;
  gammaE: number;
  dI: number;
  bestDv: number;
  t: number;
  coherenceDiag: number;
}

function parseField(token: string, lineno: number, column: string): number {
  const v = Number(token);
  if (Number.isNaN(v) && token.trim().toLowerCase() !== "nan") {
    throw new SchemaError(`line ${lineno}: ${column} is not a number: ${token.trim()}`);
  }
  return v;
}

/** Parse the sweep CSV. Columns are matched by name, so order is free. */
export function parseSweepCsv(text: string): SweepRow[] {
  let header: string[] | null = null;
  let idx: Record<string, number> = {};
  const rows: SweepRow[] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0 || line.startsWith("#")) continue;
    if (header === null) {
      header = line.split(",").map((c) => c.trim());
      for (const col of REQUIRED_COLUMNS) {
        if (!header.includes(col)) {
          throw new SchemaError(`missing column ${col}`);
        }
        idx[col] = header.indexOf(col);
      }
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${header.length} fields, got ${parts.length}`,
      );
    }
    const num = (col: string) => parseField(parts[idx[col]], i + 1, col);
    rows.push({
      x: num("x_exp_minus_beta_omega"),
      dSs: num("dSs"),
      Qe: num("Qe"),
      Ise: num("Ise"),
      gammaH: num("gamma_H"),
      gammaE: num("gamma_E"),
      dI: num("dI"),
      bestDv: num("best_dv"),
      t: num("t"),
      coherenceDiag: num("coherence_diag"),
    });
  }
  if (header === null) {
    throw new SchemaError("no header line found");
  }
  return rows;
}

/** Index of the row with the largest finite gamma_H, or -1 if none. */
export function argmaxGammaH(rows: SweepRow[]): number {
  let best = -1;
  for (let i = 0; i < rows.length; i++) {
    if (!Number.isFinite(rows[i].gammaH)) continue;
    if (best === -1 || rows[i].gammaH > rows[best].gammaH) best = i;
  }
  return best;
}
