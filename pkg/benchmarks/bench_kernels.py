"""Time the numba and numpy scan kernels against each other (and against the
exhaustive scan for small n).

    python benchmarks/bench_kernels.py --sizes 1000 10000 100000 --repeats 5
"""
import argparse
import statistics
import time

from scanstat import kernels
from scanstat.order_core import sample_uniform_order_stats
from scanstat.scan_engine import ScanSpec, scan, scan_fast

SPECS = [ScanSpec("studentized", "plus"), ScanSpec("studentized", "minus"),
         ScanSpec("standardized", "plus"), ScanSpec("standardized", "two_sided")]


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[1000, 10_000, 100_000])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--brute-max", type=int, default=2000,
                        help="largest n for which the exhaustive scan is timed too")
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    warm = sample_uniform_order_stats(50, 0)
    for spec in SPECS:
        for b in backends:
            scan_fast(warm, spec, backend=b)  # jit compile outside the timings

    header = f"{'n':>8}  {'statistic':<24}" + "".join(f"{b + ' (ms)':>14}" for b in backends)
    header += f"{'speedup':>10}{'brute (ms)':>12}{'pairs':>12}"
    print(header)
    for n in args.sizes:
        sample = sample_uniform_order_stats(n, args.seed)
        for spec in SPECS:
            row = f"{n:>8}  {spec.variant + ':' + spec.side:<24}"
            best = {}
            for b in backends:
                best[b], _ = best_of(lambda: scan_fast(sample, spec, backend=b), args.repeats)
                row += f"{best[b] * 1e3:>14.2f}"
            if "numba" in best:
                row += f"{best['numpy'] / best['numba']:>9.1f}x"
            else:
                row += f"{'-':>10}"
            if n <= args.brute_max:
                t, _ = best_of(lambda: scan(sample, spec), 1)
                row += f"{t * 1e3:>12.1f}"
            else:
                row += f"{'-':>12}"
            row += f"{scan_fast(sample, spec).pairs_evaluated:>12}"
            print(row, flush=True)


if __name__ == "__main__":
    main()
