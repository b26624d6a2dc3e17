import { describe, test, expect } from 'vitest';
import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { parseChanestCsv, parseSchedule, parseSweepCsv } from '../src/csv.js';

const FIXTURES = fileURLToPath(new URL('./fixtures', import.meta.url));
const sweepText = readFileSync(join(FIXTURES, 'dl_sweep.csv'), 'utf8');
const nmseText = readFileSync(join(FIXTURES, 'nmse.csv'), 'utf8');
const scheduleText = readFileSync(join(FIXTURES, 'qam16_schedule.csv'), 'utf8');

describe('parseSweepCsv', () => {
  test('parses the golden fixture', () => {
    const rows = parseSweepCsv(sweepText);
    // 3 array sizes x 5 trials x 4 algorithms
    expect(rows).toHaveLength(60);
    const first = rows[0];
    expect(first.scenario).toBe('dl');
    expect(first.algorithm).toBe('ea');
    expect(first.m).toBe(9);
    expect(first.trial).toBe(0);
    expect(first.converged).toBe(true);
    expect(first.metric).toBeGreaterThan(0);
    const algorithms = new Set(rows.map((r) => r.algorithm));
    expect(algorithms).toEqual(new Set(['proposed', 'ea', 'zf', 'ra']));
  });

  test('keeps 64-bit seeds verbatim as strings', () => {
    const rows = parseSweepCsv(sweepText);
    // fixture seeds exceed Number.MAX_SAFE_INTEGER; a float round trip would corrupt them
    const raw = sweepText.split('\n')[1].split(',')[4];
    expect(rows[0].seed).toBe(raw);
    expect(Number(raw) > Number.MAX_SAFE_INTEGER).toBe(true);
  });

  test('rejects an empty file', () => {
    expect(() => parseSweepCsv('')).toThrow(/file is empty/);
    expect(() => parseSweepCsv('\n\n')).toThrow(/file is empty/);
  });

  test('rejects a header-only file', () => {
    const header = sweepText.split('\n')[0];
    expect(() => parseSweepCsv(header + '\n')).toThrow(/no data rows/);
  });

  test('schema mismatch names the offending column', () => {
    const bad = sweepText.replace('metric', 'value');
    expect(() => parseSweepCsv(bad)).toThrow(
      /schema mismatch at column 6: expected 'metric', got 'value'/);
  });

  test('missing trailing column is reported', () => {
    const header = 'scenario,algorithm,M,trial,seed,metric,iterations';
    expect(() => parseSweepCsv(header + '\n')).toThrow(
      /expected 'converged', got '<none>'/);
  });

  test('short data row reports the line number', () => {
    const lines = sweepText.split('\n');
    const truncated = lines[1].split(',').slice(0, 7).join(',');
    expect(() => parseSweepCsv([lines[0], truncated].join('\n'))).toThrow(
      /line 2: expected 8 columns, got 7/);
  });

  test('non-numeric metric is reported with its column name', () => {
    const lines = sweepText.split('\n');
    const parts = lines[1].split(',');
    parts[5] = 'fast';
    expect(() => parseSweepCsv([lines[0], parts.join(',')].join('\n'))).toThrow(
      /column 'metric' is not a number: 'fast'/);
  });

  test('fractional M is rejected', () => {
    const lines = sweepText.split('\n');
    const parts = lines[1].split(',');
    parts[2] = '9.5';
    expect(() => parseSweepCsv([lines[0], parts.join(',')].join('\n'))).toThrow(
      /column 'M' is not an integer/);
  });

  test('converged must be true or false', () => {
    const lines = sweepText.split('\n');
    const parts = lines[1].split(',');
    parts[7] = 'yes';
    expect(() => parseSweepCsv([lines[0], parts.join(',')].join('\n'))).toThrow(
      /column 'converged' must be true or false, got 'yes'/);
  });
});

describe('parseChanestCsv', () => {
  test('parses the golden fixture', () => {
    const rows = parseChanestCsv(nmseText);
    expect(rows).toHaveLength(25);
    const snrs = new Set(rows.map((r) => r.snrDb));
    expect(snrs).toEqual(new Set([0, 10, 20, 30, 40]));
    for (const row of rows) {
      // separated vs cascaded ordering is statistical, not per-trial; only positivity holds here
      expect(row.nmseCascaded).toBeGreaterThan(0);
      expect(row.nmseSeparated).toBeGreaterThan(0);
    }
  });

  test('rejects a sweep header', () => {
    expect(() => parseChanestCsv(sweepText)).toThrow(
      /NMSE CSV: schema mismatch at column 1: expected 'snr_db', got 'scenario'/);
  });

  test('rejects header-only input', () => {
    expect(() => parseChanestCsv('snr_db,trial,nmse_cascaded,nmse_separated\n'))
      .toThrow(/no data rows/);
  });
});

describe('parseSchedule', () => {
  test('parses the golden fixture', () => {
    const { scheme, rows } = parseSchedule(scheduleText);
    expect(scheme).toBe('qam16');
    expect(rows).toHaveLength(16);
    expect(rows.map((r) => r.symbolIndex)).toEqual([...Array(16).keys()]);
    for (const row of rows) {
      expect(row.tauFrac).toBeGreaterThanOrEqual(0);
      expect(row.tauFrac).toBeLessThanOrEqual(1);
      expect(row.tOnFrac).toBeGreaterThanOrEqual(0);
      expect(row.tOnFrac).toBeLessThan(1);
    }
  });

  test('requires the scheme comment line', () => {
    const noComment = scheduleText.split('\n').slice(1).join('\n');
    expect(() => parseSchedule(noComment)).toThrow(/missing '# rmslink gating schedule/);
  });

  test('rejects header-only input', () => {
    const twoLines = scheduleText.split('\n').slice(0, 2).join('\n');
    expect(() => parseSchedule(twoLines + '\n')).toThrow(/no data rows/);
  });

  test('schema mismatch names the offending column', () => {
    const bad = scheduleText.replace('tau_frac', 'duty');
    expect(() => parseSchedule(bad)).toThrow(
      /schedule: schema mismatch at column 4: expected 'tau_frac', got 'duty'/);
  });
});
