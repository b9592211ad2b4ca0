"""Compare every closed-form exponential identity with direct multiplication.

Usage: python scripts/identity_sweep.py --levels 2 3 4 5 --trials 1000
"""
import argparse
import json

from cdpoly.identities import sweep_lemma

IDENTITIES = {
    9: "commutator of exponentials",
    11: "commutator, orthogonal exponents",
    12: "anticommutator of exponentials",
    14: "N = -K/2 makes e^N (e^K e^N) real",
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true", help="emit JSON lines instead of a table")
    args = p.parse_args(argv)

    failures = 0
    if not args.json:
        print(f"{'identity':<38} {'level':>5} {'max error':>11}  verdict")
    for lemma, name in IDENTITIES.items():
        for v in args.levels:
            res = sweep_lemma(lemma, v, args.trials, args.seed, args.tol)
            failures += not res.passed
            if args.json:
                print(json.dumps({"identity": name, **res.to_dict()}))
            else:
                print(f"{name:<38} {v:>5} {res.max_error:>11.2e}  {'pass' if res.passed else 'FAIL'}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
