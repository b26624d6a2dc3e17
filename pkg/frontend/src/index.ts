export { parseChanestCsv, parseSchedule, parseSweepCsv } from './csv.js';
export type { ChanestRow, ScheduleRow, SweepRow } from './csv.js';
export { renderConstellation, renderNmseVsSnr, renderSumrateVsM, sweepStats } from './figures.js';
export type { AlgorithmStats } from './figures.js';
export { ciHalfWidth, mean, sampleStd, zCritical } from './stats.js';
export { runCli } from './cli.js';
