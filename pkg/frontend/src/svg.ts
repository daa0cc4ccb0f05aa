// Minimal static SVG line charts: one main panel, optional inset.
// No DOM, no dependencies; output is a self-contained vector file.

export interface Series {
  label: string;
  xs: number[];
  ys: number[];
  color: string;
  dash?: string;
  markers?: boolean;
}

export interface Annotation {
  x: number;
  y: number;
  text: string;
}

export interface ChartSpec {
  xLabel: string;
  yLabel: string;
  series: Series[];
  annotation?: Annotation;
}

interface Frame {
  x0: number;
  y0: number;
  width: number;
  height: number;
  fontPx: number;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function finiteExtent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  const pad = 0.06 * (hi - lo);
  return [lo - pad, hi + pad];
}

// round tick steps to a 1/2/5 decade grid
function niceTicks(lo: number, hi: number, want: number): number[] {
  const span = hi - lo;
  const raw = span / Math.max(1, want);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

export function fmtValue(v: number, digits = 4): string {
  return Number.isFinite(v) ? String(Number(v.toPrecision(digits))) : "nan";
}

/** Render one chart into a positioned SVG group. */
export function renderChart(spec: ChartSpec, frame: Frame): string {
  const f = frame.fontPx;
  const margin = { left: 4.2 * f, right: 1.0 * f, top: 1.2 * f, bottom: 3.4 * f };
  const plotW = frame.width - margin.left - margin.right;
  const plotH = frame.height - margin.top - margin.bottom;
  const allX = spec.series.flatMap((s) => s.xs);
  const allY = spec.series.flatMap((s) => s.ys);
  const [xLo, xHi] = finiteExtent(allX);
  const [yLo, yHi] = finiteExtent(allY);
  const px = (x: number) => margin.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => margin.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(`<g transform="translate(${frame.x0},${frame.y0})" font-family="sans-serif" font-size="${f}">`);
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${plotW}" height="${plotH}"` +
      ` fill="white" stroke="#333" stroke-width="1"/>`,
  );

  for (const t of niceTicks(xLo, xHi, 5)) {
    const x = px(t);
    parts.push(`<line x1="${x}" y1="${margin.top + plotH}" x2="${x}" y2="${margin.top + plotH + 0.4 * f}" stroke="#333"/>`);
    parts.push(`<text x="${x}" y="${margin.top + plotH + 1.5 * f}" text-anchor="middle">${fmtTick(t)}</text>`);
  }
  for (const t of niceTicks(yLo, yHi, 5)) {
    const y = py(t);
    parts.push(`<line x1="${margin.left - 0.4 * f}" y1="${y}" x2="${margin.left}" y2="${y}" stroke="#333"/>`);
    parts.push(`<text x="${margin.left - 0.6 * f}" y="${y + 0.35 * f}" text-anchor="end">${fmtTick(t)}</text>`);
  }
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${frame.height - 0.6 * f}" text-anchor="middle">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="${1.1 * f}" y="${margin.top + plotH / 2}" text-anchor="middle"` +
      ` transform="rotate(-90 ${1.1 * f} ${margin.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  let legendRow = 0;
  for (const s of spec.series) {
    const pts: string[] = [];
    for (let i = 0; i < s.xs.length; i++) {
      if (!Number.isFinite(s.xs[i]) || !Number.isFinite(s.ys[i])) continue;
      pts.push(`${px(s.xs[i]).toFixed(2)},${py(s.ys[i]).toFixed(2)}`);
    }
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${s.color}"` +
        ` stroke-width="1.6"${dash} data-points="${pts.length}"/>`,
    );
    if (s.markers) {
      for (const p of pts) {
        const [cx, cy] = p.split(",");
        parts.push(`<circle cx="${cx}" cy="${cy}" r="${0.22 * f}" fill="${s.color}"/>`);
      }
    }
    if (spec.series.length > 1) {
      const lx = margin.left + 0.8 * f;
      const ly = margin.top + (1.0 + 1.2 * legendRow) * f;
      parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 1.6 * f}" y2="${ly}" stroke="${s.color}" stroke-width="1.6"${dash}/>`);
      parts.push(`<text x="${lx + 2.0 * f}" y="${ly + 0.35 * f}">${esc(s.label)}</text>`);
      legendRow += 1;
    }
  }

  if (spec.annotation) {
    const ax = px(spec.annotation.x);
    const ay = py(spec.annotation.y);
    parts.push(`<circle cx="${ax}" cy="${ay}" r="${0.35 * f}" fill="none" stroke="#c0392b" stroke-width="1.4"/>`);
    const anchor = ax > margin.left + 0.55 * plotW ? "end" : "start";
    const dx = anchor === "end" ? -0.6 * f : 0.6 * f;
    parts.push(
      `<text x="${ax + dx}" y="${ay - 0.8 * f}" text-anchor="${anchor}" fill="#c0392b">${esc(spec.annotation.text)}</text>`,
    );
  }
  parts.push("</g>");
  return parts.join("\n");
}

/** Full SVG document: the main chart with an inset in its upper right. */
export function renderPanel(main: ChartSpec, inset?: ChartSpec): string {
  const width = 640;
  const height = 440;
  const body: string[] = [];
  body.push(renderChart(main, { x0: 0, y0: 0, width, height, fontPx: 14 }));
  if (inset) {
    const w = 0.40 * width;
    const h = 0.38 * height;
    body.push(renderChart(inset, { x0: width - w - 24, y0: 26, width: w, height: h, fontPx: 9 }));
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" fill="white"/>\n` +
    body.join("\n") +
    "\n</svg>\n"
  );
}
