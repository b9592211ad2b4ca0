"""Largest observed |xy| / (|x| |y|) per level.

Below level 4 the ratio is exactly one (normed division algebras). From level
4 on, zero divisors push the ratio below one, and this survey checks whether
random sampling ever sees it exceed one.

Usage: python scripts/norm_ratio_survey.py --levels 1 2 3 4 5 6 --samples 100000
"""
import argparse
import json

import numpy as np

from cdpoly.algebra import mul_arrays


def ratios(level, samples, rng, batch=20_000):
    lo, hi = np.inf, 0.0
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        x = rng.standard_normal((b, 1 << level))
        y = rng.standard_normal((b, 1 << level))
        r = np.linalg.norm(mul_arrays(x, y), axis=1) / (np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))
        lo, hi = min(lo, float(r.min())), max(hi, float(r.max()))
        done += b
    return lo, hi


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    for v in args.levels:
        lo, hi = ratios(v, args.samples, np.random.default_rng([args.seed, v]))
        print(json.dumps({"level": v, "samples": args.samples, "min_ratio": lo, "max_ratio": hi, "exceeds_one": hi > 1 + 1e-12}))


if __name__ == "__main__":
    main()
