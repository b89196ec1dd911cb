#!/usr/bin/env python3
"""Compare the numba kernels with their numpy fallbacks.

Times the Bessel table (used by every Hankel basis and the Nystrom matrix)
and the grating Green's function mode sum on problem sizes taken from the
bundled experiments, and checks that both backends agree.

    python benchmarks/bench_kernels.py [--quick] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from helmscat._kernels import grating_green_sum, jy_table

WARMUP_RUNS = 1
BENCH_RUNS = 5
SEED = 7


def _time(fn, runs: int) -> float:
    for _ in range(WARMUP_RUNS):
        fn()
    best = float("inf")
    for _ in range(runs):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _cases(quick: bool):
    rng = np.random.default_rng(SEED)
    npts = 2_000 if quick else 720 * 44  # one ellipse basis of the table1 config
    x = rng.uniform(0.05, 30.0, npts)
    yield "jy_table n<=6", lambda u: jy_table(6, x, use_numba=u)

    jmax = 120
    j = np.arange(-jmax, jmax + 1)
    k, theta, period, b = 1.0, np.pi / 4, np.pi, 1.2
    lam = k * np.cos(theta) + 2 * np.pi * j / period
    gap = k * k - lam * lam
    mu = np.where(gap > 0, np.sqrt(np.abs(gap)) + 0j, 1j * np.sqrt(np.abs(gap)))
    npairs = 2_000 if quick else 256 * 64  # one system matrix of the table2 config
    p = rng.uniform([0.0, -0.5], [np.pi, 0.5], (npairs, 2))
    q = rng.uniform([0.0, -1.0], [np.pi, -0.6], (npairs, 2))
    yield "green mode sum", lambda u: grating_green_sum(p[:, 0], p[:, 1], q[:, 0], q[:, 1], lam, mu, b, period,
                                                         use_numba=u)


def run(quick: bool = False, runs: int = BENCH_RUNS) -> list[dict]:
    rows = []
    for name, fn in _cases(quick):
        a, b = fn(True), fn(False)
        a = a if isinstance(a, tuple) else (a,)
        b = b if isinstance(b, tuple) else (b,)
        diff = max(float(np.max(np.abs(u - v) / np.maximum(1.0, np.abs(v)))) for u, v in zip(a, b))
        t_nb = _time(lambda: fn(True), runs)
        t_np = _time(lambda: fn(False), runs)
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb,
                     "max_rel_diff": diff})
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small sizes, for smoke tests")
    ap.add_argument("--runs", type=int, default=BENCH_RUNS)
    ap.add_argument("--json", help="also write results as JSON")
    args = ap.parse_args(argv)
    rows = run(args.quick, args.runs)
    print(f"{'kernel':18s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for r in rows:
        print(f"{r['kernel']:18s} {r['numba_s']:10.4f} {r['numpy_s']:10.4f} {r['speedup']:8.1f} "
              f"{r['max_rel_diff']:13.2e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
