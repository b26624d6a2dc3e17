"""Timing comparison of the compiled and pure kernel backends.

Run with `python3 benchmarks/bench_kernels.py`.  Shapes mirror the sweep
workloads: K users against every array size in the default M sweep, plus
the UL objective at the default subcarrier count.  Times are per call,
best of `repeats` batches (median would hide warm-up, min is standard for
microbenchmarks).
"""

import time

import numpy as np

from rmslink._kernels import fallback

try:
    from rmslink._kernels import _core as compiled
except ImportError:  # pragma: no cover - benchmark degrades gracefully
    compiled = None

ELEMENT_SWEEP = (9, 16, 25, 36, 49)
BATCH = 2000
REPEATS = 5


def _time_call(fn, args, batch=BATCH, repeats=REPEATS):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(batch):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / batch)
    return best


def _dl_case(rng, k, m):
    h = 1e-5 * (rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m)))
    w = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
    w /= np.linalg.norm(w, axis=0, keepdims=True)
    p = rng.uniform(0.0, 0.25, k)
    return h, w, p, 1e-12


def _ul_case(rng, k, m, n):
    c = 1e-5 * (rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m)))
    f = np.exp(1j * rng.uniform(0, 2 * np.pi, m))
    users = rng.integers(0, k, n).astype(np.int64)
    powers = rng.uniform(0.0, 0.1, n)
    return c, f, users, powers, 1e-12


def main():
    rng = np.random.default_rng(0)
    rows = []
    for m in ELEMENT_SWEEP:
        args = _dl_case(rng, 4, m)
        pure_t = _time_call(fallback.dl_sum_rate, args)
        comp_t = _time_call(compiled.dl_sum_rate, args) if compiled else float("nan")
        rows.append((f"dl_sum_rate K=4 M={m}", pure_t, comp_t))
    for m in ELEMENT_SWEEP:
        args = _ul_case(rng, 5, m, 16)
        pure_t = _time_call(fallback.ul_objective, args)
        comp_t = _time_call(compiled.ul_objective, args) if compiled else float("nan")
        rows.append((f"ul_objective K=5 N=16 M={m}", pure_t, comp_t))

    print(f"{'case':<28} {'pure us':>9} {'compiled us':>12} {'speedup':>8}")
    for name, pure_t, comp_t in rows:
        speed = pure_t / comp_t if comp_t == comp_t and comp_t > 0 else float("nan")
        print(f"{name:<28} {pure_t * 1e6:>9.2f} {comp_t * 1e6:>12.2f} {speed:>7.1f}x")
    if compiled is None:
        print("\ncompiled backend unavailable; build with "
              "`python3 setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
