/**
 * Minimal multi-series line charts as standalone SVG documents.
 *
 * Supports linear and log10 y axes with decade ticks, a legend built
 * from series labels, and dashed overlay curves.  Coordinates are
 * validated: a NaN or infinite point is a bug upstream, not something
 * to silently drop onto the canvas.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dash?: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  series: Series[];
  width?: number;
  height?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { top: 42, right: 24, bottom: 48, left: 72 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-3)) return v.toExponential(0);
  return String(Math.round(v * 1000) / 1000);
}

function ticks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const mult = span / n / step >= 5 ? 5 : span / n / step >= 2 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) out.push(v);
  return out;
}

function decades(lo: number, hi: number): number[] {
  const out: number[] = [];
  const from = Math.ceil(lo);
  const to = Math.floor(hi);
  const step = Math.max(1, Math.floor((to - from) / 8) + (to - from > 8 ? 1 : 0));
  for (let e = from; e <= to; e += step) out.push(e);
  return out.length > 0 ? out : [Math.round((lo + hi) / 2)];
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 760;
  const height = spec.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of spec.series) {
    if (s.x.length !== s.y.length || s.x.length === 0) {
      throw new Error(`series ${JSON.stringify(s.label)} is empty or ragged`);
    }
    for (let i = 0; i < s.x.length; i++) {
      const xv = s.x[i]!;
      let yv = s.y[i]!;
      if (!Number.isFinite(xv) || !Number.isFinite(yv)) {
        throw new Error(`series ${JSON.stringify(s.label)} has a non-finite point at index ${i}`);
      }
      if (spec.logY) {
        if (yv <= 0) throw new Error(`log-scale series ${JSON.stringify(s.label)} has y <= 0`);
        yv = Math.log10(yv);
      }
      xMin = Math.min(xMin, xv); xMax = Math.max(xMax, xv);
      yMin = Math.min(yMin, yv); yMax = Math.max(yMax, yv);
    }
  }
  if (xMax === xMin) xMax = xMin + 1;
  if (yMax === yMin) yMax = yMin + 1;

  const sx = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">${esc(spec.title)}</text>`);

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`,
  );

  // y ticks and gridlines
  const yTickVals = spec.logY ? decades(yMin, yMax) : ticks(yMin, yMax);
  for (const v of yTickVals) {
    const y = sy(v);
    if (y < MARGIN.top - 1 || y > MARGIN.top + plotH + 1) continue;
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`);
    const label = spec.logY ? `1e${v}` : fmtTick(v);
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${esc(label)}</text>`);
  }
  // x ticks
  for (const v of ticks(xMin, xMax)) {
    const x = sx(v);
    if (x < MARGIN.left - 1 || x > MARGIN.left + plotW + 1) continue;
    parts.push(`<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 4}" stroke="#333"/>`);
    parts.push(`<text x="${x}" y="${MARGIN.top + plotH + 18}" text-anchor="middle">${esc(fmtTick(v))}</text>`);
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  // series
  spec.series.forEach((s, idx) => {
    const color = s.color ?? PALETTE[idx % PALETTE.length]!;
    const pts = s.x
      .map((xv, i) => {
        const yv = spec.logY ? Math.log10(s.y[i]!) : s.y[i]!;
        return `${sx(xv).toFixed(2)},${sy(yv).toFixed(2)}`;
      })
      .join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.6"${dash} points="${pts}"/>`,
    );
  });

  // legend
  spec.series.forEach((s, idx) => {
    const color = s.color ?? PALETTE[idx % PALETTE.length]!;
    const y = MARGIN.top + 14 + 16 * idx;
    const x = MARGIN.left + plotW - 150;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${x}" y1="${y - 4}" x2="${x + 22}" y2="${y - 4}" stroke="${color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${x + 28}" y="${y}">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  const svg = parts.join("\n");
  if (/NaN|Infinity/.test(svg)) {
    throw new Error("internal error: non-finite coordinate leaked into the SVG");
  }
  return svg;
}
