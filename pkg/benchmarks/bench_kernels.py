"""Time the compiled kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are imported side by side, so the NCSURF_NUMBA switch
does not matter here.  Compilation happens in a warm-up call and is reported
separately.
"""
import argparse
import time

import numpy as np

from ncsurf import _kernels as k


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(rng):
    n = 400
    d = rng.uniform(-2, 2, n)
    e2 = rng.uniform(0, 1, n - 1)
    return [
        ("mode recursion, N = 1e5",
         lambda: k.cn_loop_numba(2, 0.55 + 0j, 0.5, 1.0, 100_000),
         lambda: k.cn_loop_numpy(2, 0.55 + 0j, 0.5, 1.0, 100_000)),
        (f"Sturm bisection, n = {n}",
         lambda: k.bisect_numba(d, e2, -5.0, 5.0, 1e-13, 200),
         lambda: k.bisect_numpy(d, e2, -5.0, 5.0, 1e-13, 200)),
        ("Moebius orbit, 1e5 steps",
         lambda: k.mobius_orbit_numba(0.0, 1.0005, 0.1, -1e-5, 0.9995, 100_000, 1e-14),
         lambda: k.mobius_orbit_numpy(0.0, 1.0005, 0.1, -1e-5, 0.9995, 100_000, 1e-14)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not k.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'compile s':>10s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fast, slow in cases(rng):
        start = time.perf_counter()
        fast()
        compile_time = time.perf_counter() - start
        t_fast = best_of(fast, args.repeat)
        t_slow = best_of(slow, max(1, args.repeat // 2))
        print(f"{name:28s} {compile_time:10.3f} {t_fast:10.4f} {t_slow:10.4f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
