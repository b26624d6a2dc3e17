/** Small statistics helpers for confidence bands. */

export function mean(values: number[]): number {
  if (values.length === 0) throw new Error('mean of empty array');
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

export function sampleStd(values: number[]): number {
  if (values.length < 2) return 0;
  const avg = mean(values);
  let total = 0;
  for (const v of values) total += (v - avg) * (v - avg);
  return Math.sqrt(total / (values.length - 1));
}

/** Normal critical value for the supported two-sided confidence levels. */
export function zCritical(confidence: number): number {
  const table: Record<string, number> = { '0.9': 1.645, '0.95': 1.96, '0.99': 2.576 };
  const z = table[String(confidence)];
  if (z === undefined) {
    throw new Error(`unsupported confidence level ${confidence} (use 0.9, 0.95 or 0.99)`);
  }
  return z;
}

/** Half width of the confidence interval on the mean. */
export function ciHalfWidth(values: number[], confidence: number): number {
  return zCritical(confidence) * sampleStd(values) / Math.sqrt(values.length);
}

export function groupBy<T, K extends string | number>(
  items: T[], key: (item: T) => K): Map<K, T[]> {
  const out = new Map<K, T[]>();
  for (const item of items) {
    const k = key(item);
    const bucket = out.get(k);
    if (bucket) bucket.push(item);
    else out.set(k, [item]);
  }
  return out;
}
