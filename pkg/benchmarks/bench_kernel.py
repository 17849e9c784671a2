"""Compare the compiled and pure-Python search kernels on the same inputs.

Run with ``python3 benchmarks/bench_kernel.py``.  Each instance is solved
by both backends; the script checks that status, witness and node count
agree before reporting timings.
"""
from __future__ import annotations

import argparse
import statistics
import time

from factor_forge import kernel
from factor_forge.catalog import factorization_problem
from factor_forge.model import GraphSpec

# (label, spec, types); a mix of satisfiable and exhaustively refuted cases
INSTANCES = [
    ("K_7 [3,4]^2 [7]", GraphSpec.complete(1, 7), [[3, 4], [3, 4], [7]]),
    ("K_7 [3,4] [7]^2", GraphSpec.complete(1, 7), [[3, 4], [7], [7]]),
    ("K_6 [3,3]^2", GraphSpec.complete(1, 6), [[3, 3], [3, 3]]),
    ("2K_6 [3,3]^5", GraphSpec.complete(2, 6), [[3, 3]] * 5),
    ("K_8 [3,5]^2 [4,4]", GraphSpec.complete(1, 8), [[3, 5], [3, 5], [4, 4]]),
    ("K_9 [3,3,3]^4", GraphSpec.complete(1, 9), [[3, 3, 3]] * 4),
    ("K_{4x2} [8]^3", GraphSpec.equipartite(1, 4, 2), [[8]] * 3),
    ("K_9 [4,5]^2 [3,3,3]^2", GraphSpec.complete(1, 9), [[4, 5]] * 2 + [[3, 3, 3]] * 2),
    ("K_9 [4,5]^4", GraphSpec.complete(1, 9), [[4, 5]] * 4),
]
# tens of millions of nodes; the pure-Python kernel needs minutes here
HEAVY = [("K_11 [3,3,5]^5", GraphSpec.complete(1, 11), [[3, 3, 5]] * 5)]


def run(backend: str, spec: GraphSpec, types, limit: int):
    _, mult, classes, groups = factorization_problem(spec, types)
    t0 = time.perf_counter()
    status, cycles, nodes = kernel.search_with(backend, spec.order, mult, classes, groups, limit)
    return time.perf_counter() - t0, (status, cycles, nodes)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--limit", type=int, default=10**8)
    ap.add_argument("--heavy", action="store_true", help="include the K_11 refutation")
    args = ap.parse_args(argv)
    try:
        from factor_forge import _search_ext  # noqa: F401
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return 1
    print(f"{'instance':<24}{'status':>7}{'nodes':>10}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for label, spec, types in INSTANCES + (HEAVY if args.heavy else []):
        times = {}
        results = {}
        for backend in ("python", "cython"):
            samples = []
            for _ in range(args.repeat):
                dt, res = run(backend, spec, types, args.limit)
                samples.append(dt)
            times[backend] = statistics.median(samples)
            results[backend] = res
        if results["python"] != results["cython"]:
            print(f"{label}: backends disagree")
            return 2
        status, _, nodes = results["cython"]
        speed = times["python"] / max(times["cython"], 1e-9)
        print(f"{label:<24}{status:>7}{nodes:>10}{times['python']:>11.4f}{times['cython']:>11.4f}{speed:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
