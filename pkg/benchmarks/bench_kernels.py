"""Timing comparison of the compiled kernels against the pure fallbacks.

Runs each hot kernel on a representative workload with both backends and
prints a small table.  Results double as a sanity check: the two
implementations must return identical tuples on every workload.

Usage:  python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

from predalgs import _kernels_pure as pure
from predalgs.one_max import solve_pareto

try:
    from predalgs import _kernels_cy as compiled
except ImportError:
    compiled = None

NARROW = solve_pareto(0.5, 4.0)
WIDE = solve_pareto(0.1, 5.0)

WORKLOADS = [
    ("ls_mc_cell", (100.0, 73.0, 2.5, 0.5, 1729, 0, 200_000)),
    ("ls_oracle_scan", (2.5, 1.0, 0.5, 399, 30)),
    (
        "om_gu_cell",
        (NARROW.consistency, NARROW.robustness, 1.0, 0.3, 1729, 0, 200_000),
    ),
    (
        "om_fig3_cell",
        (
            0.1,
            5.0,
            WIDE.consistency,
            WIDE.robustness,
            0.5,
            0.25,
            2.2,
            64,
            1729,
            0,
            100_000,
        ),
    ),
    ("ski_fig5_cell", (10.0, 0.5, 1.0, 0.1, 12.5, 1729, 0, 200_000)),
    ("ski_fig6_cell", (10.0, 0.5, 2.0, 0.7, 1729, 0, 200_000)),
    ("ski_thm3_scan", (10.0, 0.5, 1.0, 2.0, 500)),
]


def best_of(fn, args, repeats):
    best = None
    value = None
    for _ in range(repeats):
        start = time.perf_counter()
        value = fn(*args)
        elapsed = time.perf_counter() - start
        if best is None or elapsed < best:
            best = elapsed
    return best, value


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend not built; nothing to compare")
        return 1

    header = f"{'kernel':<16}{'compiled':>12}{'pure':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, workload in WORKLOADS:
        fast, got = best_of(getattr(compiled, name), workload, args.repeats)
        slow, want = best_of(getattr(pure, name), workload, args.repeats)
        if got != want:
            print(f"{name}: backend mismatch {got!r} != {want!r}")
            return 1
        print(f"{name:<16}{fast:>11.4f}s{slow:>11.4f}s{slow / fast:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
