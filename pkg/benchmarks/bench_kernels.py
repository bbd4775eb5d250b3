"""Compare the numba and pure-numpy kernels on corpus-sized inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

from weldtube import _kernels
from weldtube.diagram import load_corpus, parse
from weldtube.finite import dihedral_quandle, symmetric_group
from weldtube.invariants import _bracket_data, knot_quandle, wirtinger_group

# 12 and 14 crossings: 4096 and 16384 bracket states
LARGE = [
    "(O1+ U2+ O3+ U4+ O5+ U6+ O7+ U8+ O9+ U10+ O11+ U12+ O2+ U3+ O4+ U5+ O6+ U7+ O8+ U9+"
    " O10+ U11+ O12+ U1+)",
    "(O1- U2+ O3- U4+ O5- U6+ O7- U1- O2+ U3- O4+ U5- O6+ U7-"
    " O8+ U9+ O10+ U11+ O12+ U13+ O14+ U8+ O9+ U10+ O11+ U12+ O13+ U14+)",
]


def timed(fn, repeat: int) -> float:
    fn()  # warm-up (numba compilation or cache load)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    codes = [k for k in load_corpus()] + [parse(t) for t in LARGE]
    closed = [k for k in codes if k.all_closed]
    brackets = [_bracket_data(k) for k in closed]
    R5 = dihedral_quandle(5)
    quandles = []
    for k in codes:
        q = knot_quandle(k)
        quandles.append((q.generator_count, [(a - 1, b - 1, c - 1) for a, b, c in q.relations]))
    S3 = symmetric_group(3)
    groups = [(wirtinger_group(k).generator_count, wirtinger_group(k).relators) for k in codes]
    return {
        "bracket": lambda: [_kernels.bracket_histogram(*b) for b in brackets],
        "colorings R5": lambda: [_kernels.count_quandle_labelings(R5.table, g, r)
                                 for g, r in quandles],
        "homs S3": lambda: [_kernels.count_group_labelings(S3.table, S3.inverse, S3.identity, g, r)
                            for g, r in groups],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    jobs = workloads()
    print(f"{'kernel':<14}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, fn in jobs.items():
        times = {}
        for backend in ("numba", "numpy"):
            _kernels.set_backend(backend)
            times[backend] = timed(fn, args.repeat)
        print(f"{name:<14}{times['numba']:>12.4f}{times['numpy']:>12.4f}"
              f"{times['numpy'] / times['numba']:>9.1f}x")


if __name__ == "__main__":
    main()
