"""Multi-start zero search over random monic polynomials.

Draws ``--count`` polynomials ``z^d + lower terms`` per level (random
bracketings, coefficient coordinates uniform on [-1, 1]) and reports the
success rate, the start index that succeeded and the local kernel dimension
of the zero that was found.

Usage: python scripts/zero_survey.py --levels 2 3 4 --count 100 --starts 200
"""
import argparse
import collections
import json
import time

import numpy as np

from cdpoly.polynomial import random_monic_polynomial, serialize
from cdpoly.solver import SolveConfig, find_zero


def survey(level, count, cfg, success_tol, keep_failures):
    rng = np.random.default_rng([cfg.seed, level])
    hits = 0
    starts = collections.Counter()
    kernels = collections.Counter()
    failures = []
    t0 = time.perf_counter()
    for _ in range(count):
        P = random_monic_polynomial(rng, level)
        rep = find_zero(P, cfg)
        if rep.residual <= success_tol:
            hits += 1
            starts[rep.start_index] += 1
            kernels[rep.kernel_dim] += 1
        elif keep_failures:
            failures.append({"polynomial": json.loads(serialize(P)), "best_residual": rep.residual})
    return {
        "level": level,
        "polynomials": count,
        "success_rate": hits / count,
        "successful_start_index": dict(sorted(starts.items())),
        "kernel_dim": dict(sorted(kernels.items())),
        "seconds": round(time.perf_counter() - t0, 2),
        "failures": failures,
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=[2, 3])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--starts", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--success-tol", type=float, default=1e-6)
    p.add_argument("--keep-failures", action="store_true")
    args = p.parse_args(argv)
    cfg = SolveConfig(starts=args.starts, seed=args.seed, workers=args.workers)
    for v in args.levels:
        print(json.dumps(survey(v, args.count, cfg, args.success_tol, args.keep_failures)))


if __name__ == "__main__":
    main()
