"""Compare the compiled and pure-Python kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per (workload, backend) with the best wall time and the
speedup over Python. Results are checked to be identical across backends.
"""
import argparse
import time

from pachgap import kernels
from pachgap.coboundary import coboundary_masks, coboundary_space, join_complex
from pachgap.expander import projective_incidence


def expansion_workload(q, m):
    G = projective_incidence(3, q)
    return f"min |Gamma(Z)|, L(3,{q}), m={m}", lambda b: kernels.min_union_popcount(G.masks, m, backend=b)


def cochain_workload(n, d, k):
    X = join_complex(n, d)
    args = (len(X.faces[k]), coboundary_masks(X, k), list(X.counts[k]), list(X.counts.get(k + 1, ())),
            coboundary_space(X, k))
    return f"h_{k} scan, join n={n} d={d}", lambda b: kernels.coboundary_scan(*args, backend=b)


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is timed")
    work = [expansion_workload(3, 6), expansion_workload(5, 5), expansion_workload(7, 4),
            cochain_workload(2, 2, 1), cochain_workload(4, 1, 0), cochain_workload(3, 2, 0)]
    for name, fn in work:
        times, results = {}, {}
        for b in backends:
            times[b], results[b] = best_time(lambda: fn(b), args.repeat)
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"{name}: backends disagree {results}")
        for b in backends:
            speed = times["python"] / times[b] if times[b] else float("inf")
            print(f"{name:38s} {b:7s} {times[b] * 1e3:10.2f} ms  x{speed:7.1f}")


if __name__ == "__main__":
    main()
