"""Local structure of the set of N with e^N (e^K e^N) real, near N = -K/2.

For each K the script linearises N -> Im(e^N (e^K e^N)) on the imaginary
subspace at N = -K/2 and prints the rank of the finite-difference Jacobian
(the local codimension of the solution set) and its smallest singular value.
Generic K is sampled at random; the degenerate family |K| = pi (where e^K is
real) is reported separately.

Usage: python scripts/conjugation_codimension.py --levels 2 3 4 --samples 20
"""
import argparse
import collections
import json
import math

import numpy as np

from cdpoly.identities import psi_residual_arrays, random_imaginary
from cdpoly.numerics import jacobian_fd, kernel_dimension


def codimension(K, threshold_ratio):
    x = (K * -0.5).coeffs[1:]
    J = jacobian_fd(lambda rows: psi_residual_arrays(K, rows), x)
    kdim, sv = kernel_dimension(J, threshold_ratio)
    return J.shape[1] - kdim, float(sv[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1e-6)
    args = p.parse_args(argv)
    for v in args.levels:
        rng = np.random.default_rng([args.seed, v])
        for family in ("generic", "real exponential"):
            counts = collections.Counter()
            smallest = math.inf
            for _ in range(args.samples):
                K = random_imaginary(rng, v)
                if family != "generic":
                    K = K * (math.pi / K.norm())
                c, s = codimension(K, args.threshold)
                counts[c] += 1
                smallest = min(smallest, s)
            print(json.dumps({
                "level": v,
                "family": family,
                "ambient_dim": (1 << v) - 1,
                "codimension_counts": dict(sorted(counts.items())),
                "smallest_singular_value": smallest,
            }))


if __name__ == "__main__":
    main()
