import { describe, test, expect } from 'vitest';
import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { renderConstellation, renderNmseVsSnr, renderSumrateVsM, sweepStats } from '../src/figures.js';
import { parseSchedule, parseSweepCsv } from '../src/csv.js';
import { mean, sampleStd, zCritical } from '../src/stats.js';

const FIXTURES = fileURLToPath(new URL('./fixtures', import.meta.url));
const sweepText = readFileSync(join(FIXTURES, 'dl_sweep.csv'), 'utf8');
const nmseText = readFileSync(join(FIXTURES, 'nmse.csv'), 'utf8');
const scheduleText = readFileSync(join(FIXTURES, 'qam16_schedule.csv'), 'utf8');

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

/** Recompute per-(algorithm, M) statistics straight from the raw text. */
function independentStats(text: string): Map<string, { mean: number; half: number }> {
  const groups = new Map<string, number[]>();
  for (const line of text.trim().split('\n').slice(1)) {
    const parts = line.split(',');
    const key = `${parts[1]}@${parts[2]}`;
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(Number(parts[5]));
  }
  const out = new Map<string, { mean: number; half: number }>();
  for (const [key, vals] of groups) {
    const n = vals.length;
    const avg = vals.reduce((a, b) => a + b, 0) / n;
    const variance = vals.reduce((a, b) => a + (b - avg) ** 2, 0) / (n - 1);
    out.set(key, { mean: avg, half: 1.96 * Math.sqrt(variance / n) });
  }
  return out;
}

describe('stats helpers', () => {
  test('mean and sample std on a hand case', () => {
    expect(mean([1, 2, 3, 4])).toBe(2.5);
    expect(sampleStd([1, 2, 3, 4])).toBeCloseTo(Math.sqrt(5 / 3), 12);
    expect(sampleStd([7])).toBe(0);
    expect(() => mean([])).toThrow(/empty/);
  });

  test('z critical values', () => {
    expect(zCritical(0.95)).toBe(1.96);
    expect(zCritical(0.99)).toBe(2.576);
    expect(() => zCritical(0.5)).toThrow(/unsupported confidence level 0.5/);
  });
});

describe('sweepStats', () => {
  test('means and half-widths match an independent recomputation to 1e-9', () => {
    const stats = sweepStats(parseSweepCsv(sweepText));
    const reference = independentStats(sweepText);
    expect(stats).toHaveLength(4);
    let checked = 0;
    for (const s of stats) {
      expect(s.m).toEqual([9, 16, 25]);
      s.m.forEach((m, i) => {
        const ref = reference.get(`${s.algorithm}@${m}`)!;
        expect(ref).toBeDefined();
        expect(Math.abs(s.mean[i] - ref.mean)).toBeLessThan(1e-9);
        expect(Math.abs(s.halfWidth[i] - ref.half)).toBeLessThan(1e-9);
        checked++;
      });
    }
    expect(checked).toBe(12);
  });

  test('algorithm order follows first appearance in the file', () => {
    const stats = sweepStats(parseSweepCsv(sweepText));
    const firstSeen: string[] = [];
    for (const line of sweepText.trim().split('\n').slice(1)) {
      const alg = line.split(',')[1];
      if (!firstSeen.includes(alg)) firstSeen.push(alg);
    }
    expect(stats.map((s) => s.algorithm)).toEqual(firstSeen);
  });

  test('confidence level changes the half width by the z ratio', () => {
    const rows = parseSweepCsv(sweepText);
    const narrow = sweepStats(rows, 0.9);
    const wide = sweepStats(rows, 0.99);
    const ratio = wide[0].halfWidth[0] / narrow[0].halfWidth[0];
    expect(ratio).toBeCloseTo(2.576 / 1.645, 12);
  });
});

describe('renderSumrateVsM', () => {
  test('golden 4-algorithm CSV yields exactly 4 legend entries', () => {
    const svg = renderSumrateVsM(sweepText);
    expect(count(svg, 'class="legend-entry"')).toBe(4);
    // algorithm names verbatim from the CSV
    for (const name of ['proposed', 'ea', 'zf', 'ra']) {
      expect(svg).toContain(`>${name}</text>`);
    }
  });

  test('one marker per (algorithm, M) pair and one band per algorithm', () => {
    const svg = renderSumrateVsM(sweepText);
    expect(count(svg, 'class="marker"')).toBe(12);
    expect(count(svg, 'class="band"')).toBe(4);
    expect(count(svg, 'class="series"')).toBe(4);
    expect(svg).toContain('DL sum rate vs transmissive elements');
  });

  test('output is deterministic', () => {
    expect(renderSumrateVsM(sweepText)).toBe(renderSumrateVsM(sweepText));
  });

  test('header-only input errors instead of emitting an empty figure', () => {
    const header = sweepText.split('\n')[0];
    expect(() => renderSumrateVsM(header + '\n')).toThrow(/no data rows/);
  });

  test('unsupported confidence level is rejected', () => {
    expect(() => renderSumrateVsM(sweepText, 0.42)).toThrow(/unsupported confidence/);
  });
});

describe('renderNmseVsSnr', () => {
  test('two series with decade ticks on the log axis', () => {
    const svg = renderNmseVsSnr(nmseText);
    expect(count(svg, 'class="legend-entry"')).toBe(2);
    expect(svg).toContain('>cascaded</text>');
    expect(svg).toContain('>separated</text>');
    // fixture spans ~1.3 to ~1e-4, so both ends of the decade range appear
    expect(svg).toContain('>1e0<');
    expect(svg).toContain('>1e-3<');
  });

  test('output is deterministic', () => {
    expect(renderNmseVsSnr(nmseText)).toBe(renderNmseVsSnr(nmseText));
  });
});

describe('renderConstellation', () => {
  test('QAM16 schedule yields 16 distinct points inside the 2/pi disc', () => {
    const svg = renderConstellation(scheduleText);
    expect(count(svg, 'class="point"')).toBe(16);
    expect(count(svg, 'class="disc"')).toBe(1);
    // every realized coefficient obeys the first-harmonic bound
    const { rows } = parseSchedule(scheduleText);
    for (const row of rows) {
      expect(Math.hypot(row.realizedRe, row.realizedIm)).toBeLessThanOrEqual(2 / Math.PI + 1e-9);
    }
  });

  test('title carries the scheme name from the file', () => {
    expect(renderConstellation(scheduleText)).toContain('synthesized qam16 constellation');
  });

  test('duplicate realized points collapse to one marker', () => {
    const lines = scheduleText.trim().split('\n');
    const doubled = [...lines, lines[2]].join('\n');
    const svg = renderConstellation(doubled);
    expect(count(svg, 'class="point"')).toBe(16);
  });
});
