"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--order N] [--repeat K]

Every workload is computed on each available backend; the script checks
that the results agree before reporting timings.
"""
import argparse
import time

from sheafgen import genfun
from sheafgen.qseries import backend
from sheafgen.qseries._dense import DenseSeries

WORKLOADS = {
    "binomial power (1-q)^-80": lambda order: DenseSeries.one(4 * order).mul_binomial(-1, 1, 0, 0, power=-80).to_terms(),
    "Z-square product": lambda order: genfun.z_square_product(order),
    "one_dim_product": lambda order: genfun.one_dim_product(order),
    "one_dim_sum": lambda order: genfun.one_dim_sum(order),
    "indefinite theta product": lambda order: genfun.indefinite_theta("product", order),
}


def clear_caches():
    genfun._z_square_dense.cache_clear()


def best_time(fn, order, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        clear_caches()
        start = time.perf_counter()
        result = fn(order)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--order", type=int, default=8, help="q-order of every workload")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    names = backend.available()
    if "cython" not in names:
        print("compiled kernels are not built; only the fallback is timed")
    print(f"{'workload':<28}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in WORKLOADS.items():
        timings, results = {}, {}
        for name in names:
            with backend.use_backend(name):
                timings[name], results[name] = best_time(fn, args.order, args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {label}")
        line = f"{label:<28}" + "".join(f"{timings[n] * 1e3:>10.1f}ms" for n in names)
        if len(names) > 1:
            line += f"{timings['python'] / timings['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
