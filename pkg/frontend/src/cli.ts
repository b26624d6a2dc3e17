/**
 * `plot --kind <sumrate_vs_m|nmse_vs_snr|constellation> --in <file> --out <file.svg>`
 * with optional `--confidence <0.9|0.95|0.99>`.  Exit 0 on success, 1 with
 * a one-line diagnostic otherwise.
 */

import { readFileSync, writeFileSync } from 'node:fs';
import { renderConstellation, renderNmseVsSnr, renderSumrateVsM } from './figures.js';

const KINDS = ['sumrate_vs_m', 'nmse_vs_snr', 'constellation'] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  input: string;
  output: string;
  confidence: number;
}

export function parseArgs(argv: string[]): Args {
  const values = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith('--') || i + 1 >= argv.length) {
      throw new Error(`expected '--flag value' pairs, got '${argv.slice(i).join(' ')}'`);
    }
    if (values.has(flag)) throw new Error(`duplicate flag ${flag}`);
    values.set(flag, argv[i + 1]);
  }
  const known = ['--kind', '--in', '--out', '--confidence'];
  for (const flag of values.keys()) {
    if (!known.includes(flag)) throw new Error(`unknown flag ${flag}`);
  }
  const kind = values.get('--kind');
  const input = values.get('--in');
  const output = values.get('--out');
  if (!kind || !input || !output) {
    throw new Error('usage: plot --kind <sumrate_vs_m|nmse_vs_snr|constellation> --in <file> --out <file.svg>');
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown kind '${kind}' (expected one of ${KINDS.join(', ')})`);
  }
  if (!output.endsWith('.svg')) {
    throw new Error(`output must be an .svg path (no raster backend available), got '${output}'`);
  }
  const confidence = values.has('--confidence') ? Number(values.get('--confidence')) : 0.95;
  return { kind: kind as Kind, input, output, confidence };
}

export function runCli(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const text = readFileSync(args.input, 'utf8');
    let svg: string;
    if (args.kind === 'sumrate_vs_m') svg = renderSumrateVsM(text, args.confidence);
    else if (args.kind === 'nmse_vs_snr') svg = renderNmseVsSnr(text);
    else svg = renderConstellation(text);
    writeFileSync(args.output, svg);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('cli.js') || entry.endsWith('cli.ts')) {
  process.exit(runCli(process.argv.slice(2)));
}
