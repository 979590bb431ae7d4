"""Compare the compiled simplex kernel with the pure-Python fallback.

    python benchmarks/bench_backends.py --n 500

Fits ``n`` random unphysical Stokes vectors (|s| in (1, 1.3]) from the
analytic seed on both backends, checks the results are identical and reports
the time per fit.
"""

import argparse
import random
import time

from tomofit import StokesVector, seed_from_stokes
from tomofit import _backend, _simplex


def workload(n, rng):
    jobs = []
    for _ in range(n):
        while True:
            v = [rng.gauss(0, 1) for _ in range(3)]
            norm = sum(x * x for x in v) ** 0.5
            if norm > 0:
                break
        r = 1.0 + 0.3 * (1.0 - rng.random())
        s = StokesVector(*(r * x / norm for x in v))
        jobs.append(((s.s1, s.s2, s.s3, 0.0), seed_from_stokes(s).t.as_tuple()))
    return jobs


def timed(kernel, jobs, repeat):
    best = float("inf")
    results = None
    for _ in range(repeat):
        start = time.perf_counter()
        results = [kernel(_simplex.STOKES_LSQ, data, x0, 2000, 1e-12, 1e-10, 1) for data, x0 in jobs]
        best = min(best, time.perf_counter() - start)
    return best, results


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=500, help="number of fits")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    jobs = workload(args.n, random.Random(args.seed))
    t_py, res_py = timed(_backend.pure_nelder_mead, jobs, args.repeat)
    iters = sum(r[2] for r in res_py) / len(res_py)
    print(f"fits: {args.n}, mean simplex steps per fit: {iters:.1f}")
    print(f"python   : {1e3 * t_py / args.n:8.3f} ms/fit")
    if not _backend.COMPILED:
        print("compiled : not built (pip install -e . --no-build-isolation)")
        return
    t_c, res_c = timed(_backend.compiled_nelder_mead, jobs, args.repeat)
    print(f"compiled : {1e3 * t_c / args.n:8.3f} ms/fit")
    print(f"speedup  : {t_py / t_c:8.1f}x")
    print(f"identical results: {res_py == res_c}")


if __name__ == "__main__":
    main()
