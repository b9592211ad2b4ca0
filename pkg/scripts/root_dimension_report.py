"""Kernel dimension of z -> z^n - zeta at the roots produced for each target.

Real targets have sphere families of roots (kernel dimension 2^v - 2 at the
non-real ones). For non-real targets the slice roots are reported as measured,
which in practice shows them to be isolated.

Usage: python scripts/root_dimension_report.py --levels 2 3 4 --orders 2 3 4 5
"""
import argparse
import collections
import json

import numpy as np

from cdpoly.algebra import CDNumber
from cdpoly.roots import nth_root_family, root_manifold_dimension


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--orders", type=int, nargs="+", default=[2, 3, 4, 5])
    p.add_argument("--targets", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    for v in args.levels:
        rng = np.random.default_rng([args.seed, v])
        for n in args.orders:
            for kind in ("positive real", "negative real", "non-real"):
                dims = collections.Counter()
                for _ in range(args.targets):
                    if kind == "non-real":
                        zeta = CDNumber(rng.standard_normal(1 << v))
                    else:
                        sign = 1.0 if kind == "positive real" else -1.0
                        zeta = CDNumber.real(v, sign * rng.uniform(0.5, 3.0))
                    for s in nth_root_family(zeta, n, samples=2, rng=rng):
                        tag = "real root" if s.direction is None and kind != "non-real" else "other"
                        dims[(tag, root_manifold_dimension(zeta, n, s.value))] += 1
                print(json.dumps({
                    "level": v,
                    "order": n,
                    "target": kind,
                    "kernel_dims": {f"{t}:{d}": c for (t, d), c in sorted(dims.items())},
                }))


if __name__ == "__main__":
    main()
