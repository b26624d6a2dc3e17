/**
 * Parsers for the documented rmslink file formats.  These are the only
 * coupling to the simulator: the sweep CSV, the channel-estimation NMSE
 * CSV, and the gating schedule file.  Schema violations raise with the
 * offending column named.
 */

export const SWEEP_COLUMNS = [
  'scenario', 'algorithm', 'M', 'trial', 'seed', 'metric', 'iterations', 'converged',
] as const;

export const CHANEST_COLUMNS = [
  'snr_db', 'trial', 'nmse_cascaded', 'nmse_separated',
] as const;

export const SCHEDULE_COLUMNS = [
  'element', 'symbol_index', 't_on_frac', 'tau_frac',
  'target_re', 'target_im', 'realized_re', 'realized_im',
] as const;

export interface SweepRow {
  scenario: string;
  algorithm: string;
  m: number;
  trial: number;
  seed: string; // 64-bit values exceed Number.MAX_SAFE_INTEGER; kept verbatim
  metric: number;
  iterations: number;
  converged: boolean;
}

export interface ChanestRow {
  snrDb: number;
  trial: number;
  nmseCascaded: number;
  nmseSeparated: number;
}

export interface ScheduleRow {
  element: number;
  symbolIndex: number;
  tOnFrac: number;
  tauFrac: number;
  targetRe: number;
  targetIm: number;
  realizedRe: number;
  realizedIm: number;
}

function checkHeader(line: string, expected: readonly string[], what: string): void {
  const got = line.split(',');
  const n = Math.max(got.length, expected.length);
  for (let i = 0; i < n; i++) {
    if (got[i] !== expected[i]) {
      throw new Error(
        `${what}: schema mismatch at column ${i + 1}: expected '${expected[i] ?? '<none>'}', got '${got[i] ?? '<none>'}'`);
    }
  }
}

function splitDataLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.trim() !== '');
}

function parseNumber(token: string, column: string, lineNo: number): number {
  const value = Number(token);
  if (token.trim() === '' || !Number.isFinite(value)) {
    throw new Error(`line ${lineNo}: column '${column}' is not a number: '${token}'`);
  }
  return value;
}

function parseInteger(token: string, column: string, lineNo: number): number {
  const value = parseNumber(token, column, lineNo);
  if (!Number.isInteger(value)) {
    throw new Error(`line ${lineNo}: column '${column}' is not an integer: '${token}'`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = splitDataLines(text);
  if (lines.length === 0) throw new Error('sweep CSV: file is empty');
  checkHeader(lines[0], SWEEP_COLUMNS, 'sweep CSV');
  if (lines.length === 1) throw new Error('sweep CSV: no data rows (header only)');
  return lines.slice(1).map((line, i) => {
    const lineNo = i + 2;
    const parts = line.split(',');
    if (parts.length !== SWEEP_COLUMNS.length) {
      throw new Error(
        `line ${lineNo}: expected ${SWEEP_COLUMNS.length} columns, got ${parts.length}`);
    }
    const converged = parts[7];
    if (converged !== 'true' && converged !== 'false') {
      throw new Error(
        `line ${lineNo}: column 'converged' must be true or false, got '${converged}'`);
    }
    return {
      scenario: parts[0],
      algorithm: parts[1],
      m: parseInteger(parts[2], 'M', lineNo),
      trial: parseInteger(parts[3], 'trial', lineNo),
      seed: parts[4],
      metric: parseNumber(parts[5], 'metric', lineNo),
      iterations: parseInteger(parts[6], 'iterations', lineNo),
      converged: converged === 'true',
    };
  });
}

export function parseChanestCsv(text: string): ChanestRow[] {
  const lines = splitDataLines(text);
  if (lines.length === 0) throw new Error('NMSE CSV: file is empty');
  checkHeader(lines[0], CHANEST_COLUMNS, 'NMSE CSV');
  if (lines.length === 1) throw new Error('NMSE CSV: no data rows (header only)');
  return lines.slice(1).map((line, i) => {
    const lineNo = i + 2;
    const parts = line.split(',');
    if (parts.length !== CHANEST_COLUMNS.length) {
      throw new Error(
        `line ${lineNo}: expected ${CHANEST_COLUMNS.length} columns, got ${parts.length}`);
    }
    return {
      snrDb: parseNumber(parts[0], 'snr_db', lineNo),
      trial: parseInteger(parts[1], 'trial', lineNo),
      nmseCascaded: parseNumber(parts[2], 'nmse_cascaded', lineNo),
      nmseSeparated: parseNumber(parts[3], 'nmse_separated', lineNo),
    };
  });
}

export function parseSchedule(text: string): { scheme: string; rows: ScheduleRow[] } {
  const lines = splitDataLines(text);
  if (lines.length === 0) throw new Error('schedule: file is empty');
  const match = /^# rmslink gating schedule, scheme=(\S+)$/.exec(lines[0]);
  if (!match) {
    throw new Error(`schedule: missing '# rmslink gating schedule, scheme=...' header`);
  }
  if (lines.length < 2) throw new Error('schedule: missing column header');
  checkHeader(lines[1], SCHEDULE_COLUMNS, 'schedule');
  if (lines.length === 2) throw new Error('schedule: no data rows (header only)');
  const rows = lines.slice(2).map((line, i) => {
    const lineNo = i + 3;
    const parts = line.split(',');
    if (parts.length !== SCHEDULE_COLUMNS.length) {
      throw new Error(
        `line ${lineNo}: expected ${SCHEDULE_COLUMNS.length} columns, got ${parts.length}`);
    }
    return {
      element: parseInteger(parts[0], 'element', lineNo),
      symbolIndex: parseInteger(parts[1], 'symbol_index', lineNo),
      tOnFrac: parseNumber(parts[2], 't_on_frac', lineNo),
      tauFrac: parseNumber(parts[3], 'tau_frac', lineNo),
      targetRe: parseNumber(parts[4], 'target_re', lineNo),
      targetIm: parseNumber(parts[5], 'target_im', lineNo),
      realizedRe: parseNumber(parts[6], 'realized_re', lineNo),
      realizedIm: parseNumber(parts[7], 'realized_im', lineNo),
    };
  });
  return { scheme: match[1], rows };
}
