#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot loops - masked confusion tallies and Epanechnikov
density evaluation - on synthetic workloads, checks that both backends
agree, and reports the speedup. Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --side 3000 --points 4096 --samples 40000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mapbayes import _kernels
from mapbayes._kernels import _fallback

try:
    from mapbayes._kernels import _core
except ImportError:
    _core = None


def best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_confusion(side: int, repeats: int, rng) -> list[tuple[str, str, float]]:
    sim = rng.integers(0, 2, (side, side)).astype(np.int8)
    obs = rng.integers(0, 2, (side, side)).astype(np.int8)
    sim[rng.random((side, side)) < 0.2] = -1
    obs[rng.random((side, side)) < 0.2] = -1

    name = f"confusion_counts {side}x{side}"
    rows = [(name, "python", best_time(lambda: _fallback.confusion_counts(sim, obs), repeats))]
    if _core is not None:
        assert _core.confusion_counts(sim, obs) == _fallback.confusion_counts(sim, obs)
        rows.append((name, "compiled", best_time(lambda: _core.confusion_counts(sim, obs), repeats)))
    return rows


def bench_density(points: int, samples: int, repeats: int, rng) -> list[tuple[str, str, float]]:
    x = np.linspace(0.0, 1.0, points)
    smp = np.sort(rng.uniform(0.0, 1.0, samples))
    h = 0.05

    name = f"epanechnikov_density {points}pts x {samples}smp"
    rows = [(name, "python", best_time(lambda: _fallback.epanechnikov_density(x, smp, h), repeats))]
    if _core is not None:
        agree = np.allclose(
            _core.epanechnikov_density(x, smp, h),
            _fallback.epanechnikov_density(x, smp, h),
            rtol=0.0,
            atol=1e-12,
        )
        assert agree, "backend outputs diverge"
        rows.append((name, "compiled", best_time(lambda: _core.epanechnikov_density(x, smp, h), repeats)))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--side", type=int, default=2000, help="confusion raster side length")
    parser.add_argument("--points", type=int, default=2048, help="density evaluation points")
    parser.add_argument("--samples", type=int, default=20000, help="density sample count")
    parser.add_argument("--repeats", type=int, default=5, help="repeats per timing (best is kept)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"active backend: {_kernels.BACKEND}")
    if _core is None:
        print("compiled extension not built; timing the numpy fallback only")

    rng = np.random.default_rng(args.seed)
    rows = bench_confusion(args.side, args.repeats, rng)
    rows += bench_density(args.points, args.samples, args.repeats, rng)

    width = max(len(r[0]) for r in rows)
    baseline: dict[str, float] = {}
    print(f"{'kernel':<{width}}  {'backend':<8}  {'best':>10}  {'speedup':>8}")
    for name, backend, seconds in rows:
        if backend == "python":
            baseline[name] = seconds
        speedup = baseline[name] / seconds
        print(f"{name:<{width}}  {backend:<8}  {seconds * 1e3:>8.2f}ms  {speedup:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
