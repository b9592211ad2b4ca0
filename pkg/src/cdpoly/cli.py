"""Command line front end.

Every command writes a JSON run manifest as its first stdout line, followed by
JSON-lines results. Human-readable summaries go to stderr. Exit codes: 2 for
malformed input, 3 for violated preconditions, 4 when nothing was found.

``cdpoly replay manifest.json`` reruns the exact command recorded in a
manifest; numerical output lines are byte-identical to the original run.
"""
from __future__ import annotations

import argparse
import datetime
import json
import sys
from collections.abc import Sequence

import numpy as np

from . import __version__
from .algebra import CDNumber, find_zero_divisor_pair, from_json
from .errors import NoResultError, PreconditionError, SchemaError
from .identities import sweep_lemma
from .polynomial import Polynomial, load
from .roots import nth_root_family, root_residual
from .solver import SolveConfig, find_zero, find_zeros, polynomial_jacobian
from .symmetry import CircleGroup, average, is_left_symmetry, is_right_symmetry, parse_group_file
from .numerics import kernel_dimension

EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_NO_RESULT = 2, 3, 4


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _say(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _point(text: str, P: Polynomial | None = None) -> CDNumber:
    try:
        z = from_json(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"point is not valid JSON: {exc.msg}") from None
    if P is not None and z.dim != P.dim:
        raise SchemaError(f"point has {z.dim} coefficients, polynomial level {P.level} needs {P.dim}")
    return z


def _load_poly(path: str) -> Polynomial:
    try:
        return load(path)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    P = _load_poly(args.poly)
    z = _point(args.point, P)
    _emit({"value": P(z).to_list()})
    return 0


def _solve_config(args) -> SolveConfig:
    return SolveConfig(
        starts=args.starts,
        max_iters=args.max_iters,
        tol_residual=args.tol,
        seed=args.seed,
        search_radius=args.radius,
        workers=args.workers,
    )


def cmd_solve(args) -> int:
    P = _load_poly(args.poly)
    cfg = _solve_config(args)
    if args.count > 1:
        reports = find_zeros(P, cfg, args.count)
        for r in reports:
            _emit(r.to_dict())
        _say(f"{len(reports)} zero(s) kept from {args.count} runs")
        if not reports:
            raise NoResultError("no start converged")
        return 0
    rep = find_zero(P, cfg)
    _emit(rep.to_dict())
    if not rep.success:
        _say(f"no zero found; best residual {rep.residual:.3g}")
        return EXIT_NO_RESULT
    _say(f"zero found from start {rep.start_index}, residual {rep.residual:.3g}, kernel dim {rep.kernel_dim}")
    return 0


def cmd_roots(args) -> int:
    zeta = _point(args.zeta)
    rng = np.random.default_rng(args.seed)
    family = nth_root_family(zeta, args.n, samples=args.samples, rng=rng)
    for s in family:
        d = s.to_dict()
        d["residual"] = root_residual(zeta, args.n, s.value)
        _emit(d)
    _say(f"{len(family)} root(s) of order {args.n}")
    return 0


def cmd_dim(args) -> int:
    P = _load_poly(args.poly)
    z = _point(args.point, P)
    res = P(z).norm()
    if res > args.tol:
        raise PreconditionError(f"point is not a zero (|P(z)| = {res:.3g})")
    kdim, sv = kernel_dimension(polynomial_jacobian(P, z.coeffs), args.threshold)
    _emit({"kernel_dim": kdim, "singular_values": [float(s) for s in sv], "residual": res})
    return 0


def cmd_identity_check(args) -> int:
    res = sweep_lemma(args.lemma, args.level, args.trials, args.seed, args.tol)
    _emit(res.to_dict())
    verdict = "pass" if res.passed else "FAIL"
    _say(f"{verdict}, max_err = {res.max_error:.3g} (tol {res.tol:g})")
    return 0 if res.passed else 1


def cmd_symmetry(args) -> int:
    P = _load_poly(args.poly)
    g = _point(args.g)
    check = is_right_symmetry if args.side == "right" else is_left_symmetry
    out = check(P, g, sample_count=args.samples, radius=args.radius, tol=args.tol, seed=args.seed)
    _emit({"side": args.side, "holds": out.holds, "max_deviation": out.max_deviation})
    return 0


def cmd_average(args) -> int:
    P = _load_poly(args.poly)
    if (args.circle_direction is None) == (args.finite_group_file is None):
        raise SchemaError("give exactly one of --circle-direction and --finite-group-file")
    if args.circle_direction is not None:
        G = CircleGroup(_point(args.circle_direction), args.nodes)
    else:
        try:
            with open(args.finite_group_file, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read {args.finite_group_file}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise SchemaError(f"group file: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, list):
            raise SchemaError("group file must hold a JSON list of coefficient arrays")
        G = parse_group_file(data)
    avg = average(P, G)
    for text in args.points:
        z = _point(text, P)
        _emit({"point": z.to_list(), "value": avg(z).to_list()})
    return 0


def cmd_zerodiv(args) -> int:
    pair = find_zero_divisor_pair(args.level)
    if pair is None:
        _emit({"level": args.level, "result": "none"})
        _say("none")
        return 0
    x, y = pair
    _emit({"level": args.level, "result": {"x": x.to_list(), "y": y.to_list()}})
    _say(f"{x} * {y} = 0")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdpoly", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a polynomial at a point")
    s.add_argument("poly")
    s.add_argument("point", help="JSON array of 2^v reals")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("solve", help="multi-start zero search")
    s.add_argument("poly")
    s.add_argument("--starts", type=int, default=64)
    s.add_argument("--max-iters", type=int, default=500)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=float, default=None)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("roots", help="n-th roots of a target")
    s.add_argument("zeta", help="JSON array of 2^v reals")
    s.add_argument("n", type=int)
    s.add_argument("--samples", type=int, default=8)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("dim", help="local zero-set dimension at a zero")
    s.add_argument("poly")
    s.add_argument("point")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--threshold", type=float, default=1e-6)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("identity-check", help="closed-form identities vs direct products")
    s.add_argument("--lemma", type=int, choices=[9, 11, 12, 14], required=True)
    s.add_argument("--level", type=int, default=3)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_identity_check)

    s = sub.add_parser("symmetry", help="sampled test of P(g z) = P(z)")
    s.add_argument("poly")
    s.add_argument("g")
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--side", choices=["left", "right"], default="left")
    s.add_argument("--radius", type=float, default=2.0)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_symmetry)

    s = sub.add_parser("average", help="group-averaged polynomial values")
    s.add_argument("poly")
    s.add_argument("points", nargs="+")
    s.add_argument("--circle-direction", default=None)
    s.add_argument("--finite-group-file", default=None)
    s.add_argument("--nodes", type=int, default=16)
    s.set_defaults(func=cmd_average)

    s = sub.add_parser("zerodiv", help="first zero-divisor pair among signed generator pairs")
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_zerodiv)

    s = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    s.add_argument("manifest")
    s.set_defaults(func=None)
    return p


def manifest(args, argv: Sequence[str]) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    inputs = [config[k] for k in ("poly", "finite_group_file") if config.get(k)]
    return {
        "manifest": {
            "command": args.command,
            "argv": list(argv),
            "inputs": inputs,
            "config": config,
            "seed": config.get("seed", 0),
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
    }


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        try:
            with open(args.manifest, encoding="utf-8") as fh:
                recorded = json.load(fh)
            argv = list(recorded["manifest"]["argv"])
        except (OSError, json.JSONDecodeError, KeyError, TypeError):
            _say(f"cannot read manifest {args.manifest}")
            return EXIT_SCHEMA
        args = parser.parse_args(argv)
    _emit(manifest(args, argv))
    try:
        return args.func(args)
    except SchemaError as exc:
        _say(f"input error: {exc}")
        return EXIT_SCHEMA
    except PreconditionError as exc:
        _say(f"precondition failed: {exc}")
        return EXIT_PRECONDITION
    except NoResultError as exc:
        _say(str(exc))
        return EXIT_NO_RESULT


if __name__ == "__main__":
    sys.exit(main())
