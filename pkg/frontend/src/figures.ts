/**
 * Figure builders: sweep CSV -> sum-rate-vs-M chart with confidence
 * bands, NMSE CSV -> log-log chart, gating schedule -> constellation
 * scatter.  Pure string-to-string; callers handle file I/O.
 */

import { parseChanestCsv, parseSchedule, parseSweepCsv, SweepRow } from './csv.js';
import { ciHalfWidth, groupBy, mean } from './stats.js';
import { renderLineChart, renderScatter, Series } from './svg.js';

export interface AlgorithmStats {
  algorithm: string;
  m: number[];
  mean: number[];
  halfWidth: number[];
}

/** Per-algorithm mean metric and CI half-width at each array size. */
export function sweepStats(rows: SweepRow[], confidence = 0.95): AlgorithmStats[] {
  const algorithms: string[] = [];
  for (const row of rows) {
    if (!algorithms.includes(row.algorithm)) algorithms.push(row.algorithm);
  }
  return algorithms.map((algorithm) => {
    const byM = groupBy(rows.filter((r) => r.algorithm === algorithm), (r) => r.m);
    const ms = [...byM.keys()].sort((a, b) => a - b);
    const means = ms.map((m) => mean(byM.get(m)!.map((r) => r.metric)));
    const half = ms.map((m) => ciHalfWidth(byM.get(m)!.map((r) => r.metric), confidence));
    return { algorithm, m: ms, mean: means, halfWidth: half };
  });
}

export function renderSumrateVsM(text: string, confidence = 0.95): string {
  const rows = parseSweepCsv(text);
  const stats = sweepStats(rows, confidence);
  const scenario = rows[0].scenario.toUpperCase();
  const series: Series[] = stats.map((s) => ({
    name: s.algorithm,
    xs: s.m,
    ys: s.mean,
    lo: s.mean.map((v, i) => v - s.halfWidth[i]),
    hi: s.mean.map((v, i) => v + s.halfWidth[i]),
  }));
  return renderLineChart(series, {
    title: `${scenario} sum rate vs transmissive elements`,
    xLabel: 'number of elements M',
    yLabel: 'sum rate (bits/s/Hz)',
  });
}

export function renderNmseVsSnr(text: string): string {
  const rows = parseChanestCsv(text);
  const bySnr = groupBy(rows, (r) => r.snrDb);
  const snrs = [...bySnr.keys()].sort((a, b) => a - b);
  const series: Series[] = [
    {
      name: 'cascaded',
      xs: snrs,
      ys: snrs.map((s) => mean(bySnr.get(s)!.map((r) => r.nmseCascaded))),
    },
    {
      name: 'separated',
      xs: snrs,
      ys: snrs.map((s) => mean(bySnr.get(s)!.map((r) => r.nmseSeparated))),
    },
  ];
  return renderLineChart(series, {
    title: 'LS estimation NMSE vs pilot SNR',
    xLabel: 'pilot SNR (dB)',
    yLabel: 'NMSE',
    logY: true,
  });
}

const MAX_FIRST_HARMONIC = 2 / Math.PI;

export function renderConstellation(text: string): string {
  const { scheme, rows } = parseSchedule(text);
  // one marker per distinct realized point
  const seen = new Set<string>();
  const points = [];
  for (const row of rows) {
    const key = `${row.realizedRe.toPrecision(12)},${row.realizedIm.toPrecision(12)}`;
    if (seen.has(key)) continue;
    seen.add(key);
    points.push({ x: row.realizedRe, y: row.realizedIm });
  }
  return renderScatter(points, {
    title: `synthesized ${scheme} constellation`,
    axisLimit: 0.75,
    discRadius: MAX_FIRST_HARMONIC,
  });
}
