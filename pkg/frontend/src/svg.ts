/**
 * Minimal deterministic SVG emitter: line charts with optional confidence
 * bands and square scatter plots.  No timestamps, no randomness — identical
 * input yields an identical file.
 */

export interface Series {
  name: string;
  xs: number[];
  ys: number[];
  lo?: number[];
  hi?: number[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
  width?: number;
  height?: number;
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

const MARGIN = { top: 36, right: 24, bottom: 46, left: 64 };

export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  return String(Number(v.toPrecision(8)));
}

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(min: number, max: number, lo: number, hi: number): Scale {
  const span = max - min || 1;
  const scale = ((v: number) => lo + ((v - min) / span) * (hi - lo)) as Scale;
  const step = span / 5;
  scale.ticks = Array.from({ length: 6 }, (_, i) => min + i * step);
  return scale;
}

function logScale(min: number, max: number, lo: number, hi: number): Scale {
  if (min <= 0) throw new Error('log axis requires positive values');
  const lmin = Math.log10(min);
  const lmax = Math.log10(max);
  const span = lmax - lmin || 1;
  const scale = ((v: number) => lo + ((Math.log10(v) - lmin) / span) * (hi - lo)) as Scale;
  const first = Math.ceil(lmin);
  const last = Math.floor(lmax);
  scale.ticks = [];
  for (let d = first; d <= last; d++) scale.ticks.push(10 ** d);
  if (scale.ticks.length === 0) scale.ticks = [min, max];
  return scale;
}

function tickLabel(v: number, log: boolean): string {
  if (log) {
    const d = Math.log10(v);
    if (Number.isInteger(d)) return `1e${d}`;
  }
  return String(Number(v.toPrecision(4)));
}

export function renderLineChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0) throw new Error('nothing to plot');
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => [...s.ys, ...(s.lo ?? []), ...(s.hi ?? [])]);
  const x = linearScale(Math.min(...xs), Math.max(...xs), MARGIN.left, width - MARGIN.right);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const y = opts.logY
    ? logScale(yMin, yMax, height - MARGIN.bottom, MARGIN.top)
    : linearScale(yMin, yMax, height - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="14">${esc(opts.title)}</text>`);

  // axes and ticks
  const x0 = MARGIN.left;
  const y0 = height - MARGIN.bottom;
  parts.push(`<g stroke="#333" fill="none"><path d="M${x0} ${MARGIN.top} V${y0} H${width - MARGIN.right}"/></g>`);
  for (const t of x.ticks) {
    const px = x(t);
    parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 4}" stroke="#333"/>`);
    parts.push(`<text x="${fmt(px)}" y="${y0 + 18}" text-anchor="middle">${tickLabel(t, false)}</text>`);
  }
  for (const t of y.ticks) {
    const py = y(t);
    parts.push(`<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#333"/>`);
    parts.push(`<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end">${tickLabel(t, opts.logY ?? false)}</text>`);
  }
  parts.push(`<text x="${(x0 + width - MARGIN.right) / 2}" y="${height - 10}" text-anchor="middle">${esc(opts.xLabel)}</text>`);
  parts.push(`<text x="16" y="${(MARGIN.top + y0) / 2}" text-anchor="middle" transform="rotate(-90 16 ${(MARGIN.top + y0) / 2})">${esc(opts.yLabel)}</text>`);

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (s.lo && s.hi) {
      const upper = s.xs.map((vx, j) => `${fmt(x(vx))},${fmt(y(s.hi![j]))}`);
      const lower = [...s.xs].reverse().map((vx, j) =>
        `${fmt(x(vx))},${fmt(y(s.lo![s.lo!.length - 1 - j]))}`);
      parts.push(`<polygon class="band" points="${[...upper, ...lower].join(' ')}" fill="${color}" opacity="0.15"/>`);
    }
    const pts = s.xs.map((vx, j) => `${fmt(x(vx))},${fmt(y(s.ys[j]))}`).join(' ');
    parts.push(`<polyline class="series" points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    for (let j = 0; j < s.xs.length; j++) {
      parts.push(`<circle class="marker" cx="${fmt(x(s.xs[j]))}" cy="${fmt(y(s.ys[j]))}" r="3" fill="${color}"/>`);
    }
  });

  // legend, one entry per series, names verbatim
  parts.push(`<g class="legend">`);
  series.forEach((s, i) => {
    const ly = MARGIN.top + 8 + i * 18;
    const lx = width - MARGIN.right - 150;
    const color = PALETTE[i % PALETTE.length];
    parts.push(`<g class="legend-entry"><line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="1.5"/>` +
      `<text x="${lx + 28}" y="${ly + 4}">${esc(s.name)}</text></g>`);
  });
  parts.push(`</g>`);
  parts.push(`</svg>`);
  return parts.join('\n') + '\n';
}

export interface ScatterPoint {
  x: number;
  y: number;
}

export function renderScatter(points: ScatterPoint[], opts: {
  title: string;
  axisLimit: number;
  discRadius?: number;
}): string {
  if (points.length === 0) throw new Error('nothing to plot');
  const size = 420;
  const half = size / 2;
  const scale = (half - 40) / opts.axisLimit;
  const px = (v: number) => half + v * scale;
  const py = (v: number) => half - v * scale;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${size} ${size}" font-family="sans-serif" font-size="12">`);
  parts.push(`<rect width="${size}" height="${size}" fill="white"/>`);
  parts.push(`<text x="${half}" y="20" text-anchor="middle" font-size="14">${esc(opts.title)}</text>`);
  parts.push(`<g stroke="#999"><line x1="${px(-opts.axisLimit)}" y1="${half}" x2="${px(opts.axisLimit)}" y2="${half}"/>` +
    `<line x1="${half}" y1="${py(opts.axisLimit)}" x2="${half}" y2="${py(-opts.axisLimit)}"/></g>`);
  if (opts.discRadius !== undefined) {
    parts.push(`<circle class="disc" cx="${half}" cy="${half}" r="${fmt(opts.discRadius * scale)}" fill="none" stroke="#999" stroke-dasharray="4 3"/>`);
  }
  for (const p of points) {
    parts.push(`<circle class="point" cx="${fmt(px(p.x))}" cy="${fmt(py(p.y))}" r="4" fill="#1f77b4"/>`);
  }
  parts.push(`</svg>`);
  return parts.join('\n') + '\n';
}
