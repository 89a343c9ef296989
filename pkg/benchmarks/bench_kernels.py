"""Compare the compiled and pure-Python search kernels on compiled grid and savings tasks.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--size 7x10]
"""
from __future__ import annotations

import argparse
import random
import statistics
import time
import warnings

from uniplan import search
from uniplan.compiler import BoundUnverified, compile_task
from uniplan.domains import FinanceSpec, gen_finance, gen_navigation, random_nav_spec


def workloads(rows: int, cols: int):
    rng = random.Random(0)
    nav = gen_navigation(random_nav_spec(rng, rows, cols, 6))
    fin = gen_finance(FinanceSpec(14, 5, ((1, 1), (2, 3), (3, 4), (5, 7))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundUnverified)
        for name, task in (("nav", nav), ("finance", fin)):
            yield f"{name}/plain", task
            for metric in ("count", "delta", "range"):
                yield f"{name}/{metric}_dc", compile_task(task, metric, "dc").task


def best_time(task, heuristic, backend, repeat):
    times, res = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = search.astar(task, heuristic, backend=backend)
        times.append(time.perf_counter() - t0)
    return min(times), res


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--size", default="7x10", help="grid rows x cols")
    args = ap.parse_args(argv)
    rows, cols = map(int, args.size.split("x"))
    if search.BACKEND != "cython":
        print("compiled kernel not built; only the Python backend is available")
        return 1
    print(f"{'workload':<20} {'h':<6} {'expanded':>9} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    speedups = []
    for name, task in workloads(rows, cols):
        for h in ("blind", "hmax"):
            tp, rp = best_time(task, h, "python", args.repeat)
            tc, rc = best_time(task, h, "cython", args.repeat)
            assert (rp.cost, rp.plan) == (rc.cost, rc.plan), name
            speedups.append(tp / tc)
            print(f"{name:<20} {h:<6} {rc.stats.expanded:>9} {tp:>9.4f} {tc:>9.4f} {tp / tc:>7.1f}x")
    print(f"geometric mean speedup: {statistics.geometric_mean(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
