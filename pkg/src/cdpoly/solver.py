"""Multi-start Levenberg-Marquardt zero finding for polynomials.

A polynomial of level ``v`` is treated as a map ``R^(2^v) -> R^(2^v)`` on
coefficient vectors. Keeping the full vector residual (rather than ``|P|^2``)
means the Jacobian at a zero also tells us the local dimension of the zero
set, which is used for deduplication and for walking along components.
"""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import CDNumber
from .errors import PreconditionError
from .numerics import jacobian_fd, kernel_basis, kernel_dimension
from .polynomial import Polynomial, degree, evaluate_arrays

log = logging.getLogger(__name__)

LAMBDA_INIT = 1e-3
LAMBDA_MIN, LAMBDA_MAX = 1e-12, 1e8
LAMBDA_UP, LAMBDA_DOWN = 10.0, 0.3


@dataclass(frozen=True)
class SolveConfig:
    starts: int = 64
    max_iters: int = 500
    tol_residual: float = 1e-9
    seed: int = 0
    search_radius: float | None = None
    deterministic_starts: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.starts < 1 or self.max_iters < 1 or self.tol_residual <= 0 or self.workers < 1:
            raise PreconditionError("starts, max_iters, tol_residual and workers must be positive")
        if self.search_radius is not None and self.search_radius <= 0:
            raise PreconditionError("search_radius must be positive")

    def radius_for(self, P: Polynomial) -> float:
        if self.search_radius is not None:
            return self.search_radius
        return 1.0 + P.coefficient_mass()


@dataclass(frozen=True)
class SolveReport:
    zero: CDNumber | None
    residual: float
    iterations: int
    start_index: int
    jacobian_singular_values: np.ndarray = field(repr=False)
    kernel_dim: int
    point: CDNumber | None = field(default=None, repr=False)

    @property
    def success(self) -> bool:
        return self.zero is not None

    def to_dict(self) -> dict:
        best = self.zero if self.zero is not None else self.point
        return {
            "success": self.success,
            "zero": None if self.zero is None else self.zero.to_list(),
            "best_point": None if best is None else best.to_list(),
            "residual": self.residual,
            "iterations": self.iterations,
            "start_index": self.start_index,
            "kernel_dim": self.kernel_dim,
            "jacobian_singular_values": [float(s) for s in self.jacobian_singular_values],
        }


def residual_map(P: Polynomial):
    return lambda pts: evaluate_arrays(P, pts)


def polynomial_jacobian(P: Polynomial, z: np.ndarray) -> np.ndarray:
    return jacobian_fd(residual_map(P), np.asarray(z, dtype=np.float64))


def deterministic_seeds(v: int) -> list[np.ndarray]:
    """Starting points 0, 1, -1, i_1, -i_1, i_2, -i_2, ..."""
    n = 1 << v
    out = [np.zeros(n)]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        out.append(e)
        out.append(-e)
    return out


def start_point(P: Polynomial, cfg: SolveConfig, index: int) -> np.ndarray:
    seeds = deterministic_seeds(P.level) if cfg.deterministic_starts else []
    if index < len(seeds):
        return seeds[index]
    rng = np.random.default_rng([cfg.seed, index])
    n = P.dim
    direction = rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    r = cfg.radius_for(P) * rng.random() ** (1.0 / n)
    return direction * r


def levenberg_marquardt(P: Polynomial, x0: np.ndarray, max_iters: int, tol: float) -> tuple[np.ndarray, float, int]:
    """Damped Gauss-Newton on the vector residual. Returns ``(x, |P(x)|, iterations)``."""
    f = residual_map(P)
    x = np.asarray(x0, dtype=np.float64).copy()
    r = f(x[None])[0]
    rn = float(np.linalg.norm(r))
    lam = LAMBDA_INIT
    it = 0
    J = None
    stalled = 0
    while it < max_iters and rn > tol:
        if J is None:
            J = jacobian_fd(f, x)
            JtJ = J.T @ J
            g = J.T @ r
        it += 1
        A = JtJ + lam * np.eye(x.shape[0])
        try:
            step = np.linalg.solve(A, -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(A, -g, rcond=None)[0]
        x_new = x + step
        r_new = f(x_new[None])[0]
        rn_new = float(np.linalg.norm(r_new))
        if np.isfinite(rn_new) and rn_new < rn:
            stalled = 0 if rn_new < 0.999 * rn else stalled + 1
            x, r, rn = x_new, r_new, rn_new
            lam = max(lam * LAMBDA_DOWN, LAMBDA_MIN)
            J = None
        else:
            if lam >= LAMBDA_MAX:
                break
            lam = min(lam * LAMBDA_UP, LAMBDA_MAX)
            stalled += 1
        if stalled > 60:
            break
    return x, rn, it


def _run_start(P: Polynomial, cfg: SolveConfig, index: int) -> tuple[np.ndarray, float, int]:
    x0 = start_point(P, cfg, index)
    return levenberg_marquardt(P, x0, cfg.max_iters, cfg.tol_residual)


def _report(P: Polynomial, x: np.ndarray, rn: float, it: int, index: int, ok: bool) -> SolveReport:
    J = polynomial_jacobian(P, x)
    kdim, sv = kernel_dimension(J)
    z = CDNumber(x)
    return SolveReport(z if ok else None, rn, it, index, sv, kdim if ok else 0, z)


def find_zero(P: Polynomial, cfg: SolveConfig = SolveConfig()) -> SolveReport:
    """First successful start (in start-index order), else the best failure.

    With ``cfg.workers > 1`` starts run in parallel batches; since each start
    depends only on ``(seed, index)`` and batches are scanned in index order,
    the report is identical to a serial run.
    """
    if degree(P) < 1:
        raise PreconditionError("zero finding needs a polynomial of degree >= 1")
    best: tuple[float, np.ndarray, int, int] | None = None
    if cfg.workers == 1:
        for idx in range(cfg.starts):
            x, rn, it = _run_start(P, cfg, idx)
            if rn <= cfg.tol_residual:
                return _report(P, x, rn, it, idx, True)
            if best is None or rn < best[0]:
                best = (rn, x, it, idx)
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            for lo in range(0, cfg.starts, cfg.workers):
                idxs = list(range(lo, min(lo + cfg.workers, cfg.starts)))
                results = list(pool.map(lambda i: _run_start(P, cfg, i), idxs))
                for idx, (x, rn, it) in zip(idxs, results):
                    if rn <= cfg.tol_residual:
                        return _report(P, x, rn, it, idx, True)
                    if best is None or rn < best[0]:
                        best = (rn, x, it, idx)
    assert best is not None
    rn, x, it, idx = best
    log.info("no start converged; best residual %.3g from start %d", rn, idx)
    return _report(P, x, rn, it, idx, False)


def find_zeros(P: Polynomial, cfg: SolveConfig = SolveConfig(), count: int = 10) -> list[SolveReport]:
    """Successful reports from ``count`` runs with seeds ``cfg.seed + j``.

    Only the first run uses the fixed seed points; later runs start from random
    points so that positive-dimensional zero sets get sampled. A zero within
    ``1e-6 * search_radius`` of an already kept isolated zero is dropped;
    points with a nontrivial kernel are kept as manifold samples.
    """
    if degree(P) < 1:
        raise PreconditionError("zero finding needs a polynomial of degree >= 1")
    radius = cfg.radius_for(P)
    kept: list[SolveReport] = []
    for j in range(count):
        run_cfg = SolveConfig(
            starts=cfg.starts,
            max_iters=cfg.max_iters,
            tol_residual=cfg.tol_residual,
            seed=cfg.seed + j,
            search_radius=cfg.search_radius,
            deterministic_starts=cfg.deterministic_starts and j == 0,
            workers=cfg.workers,
        )
        rep = find_zero(P, run_cfg)
        if not rep.success:
            continue
        if rep.kernel_dim == 0 and any(
            float(np.linalg.norm(rep.zero.coeffs - k.zero.coeffs)) < 1e-6 * radius for k in kept
        ):
            continue
        kept.append(rep)
    return kept


def local_zero_set_dimension(P: Polynomial, z0: CDNumber, threshold_ratio: float = 1e-6, tol: float = 1e-8) -> int:
    z = z0.embed(P.level).coeffs
    res = float(np.linalg.norm(evaluate_arrays(P, z[None])[0]))
    if res > tol:
        raise PreconditionError(f"point is not a zero (|P(z0)| = {res:.3g})")
    kdim, _ = kernel_dimension(polynomial_jacobian(P, z), threshold_ratio)
    return kdim


class TraceTruncated(UserWarning):
    pass


def _correct(P: Polynomial, x: np.ndarray, tol: float, max_iters: int = 50) -> tuple[np.ndarray, float]:
    f = residual_map(P)
    r = f(x[None])[0]
    rn = float(np.linalg.norm(r))
    for _ in range(max_iters):
        if rn <= tol:
            break
        J = jacobian_fd(f, x)
        step = np.linalg.lstsq(J, -r, rcond=1e-10)[0]
        x = x + step
        r = f(x[None])[0]
        rn = float(np.linalg.norm(r))
    return x, rn


def trace_component(
    P: Polynomial,
    z0: CDNumber,
    steps: int,
    step_size: float,
    seed: int = 0,
    tol: float = 1e-11,
    threshold_ratio: float = 1e-6,
) -> list[CDNumber]:
    """Random walk along the zero component through ``z0``.

    Each step moves ``step_size`` along a random unit vector of the Jacobian
    kernel and then returns to the zero set with minimum-norm Gauss-Newton
    corrections. The returned chain starts with ``z0``. If the corrector
    cannot reach ``tol`` the chain is cut short and :class:`TraceTruncated`
    is warned.
    """
    x = z0.embed(P.level).coeffs.copy()
    if local_zero_set_dimension(P, z0, threshold_ratio) < 1:
        raise PreconditionError("z0 is an isolated zero; nothing to trace")
    rng = np.random.default_rng(seed)
    chain = [CDNumber(x)]
    f = residual_map(P)
    for step in range(steps):
        basis = kernel_basis(jacobian_fd(f, x), threshold_ratio)
        if basis.shape[0] == 0:
            warnings.warn(f"kernel vanished after {step} steps", TraceTruncated, stacklevel=2)
            break
        w = rng.standard_normal(basis.shape[0])
        direction = w @ basis
        direction /= np.linalg.norm(direction)
        x_new, rn = _correct(P, x + step_size * direction, tol)
        if not math.isfinite(rn) or rn > tol:
            warnings.warn(
                f"corrector failed at step {step} (residual {rn:.3g})", TraceTruncated, stacklevel=2
            )
            break
        x = x_new
        chain.append(CDNumber(x))
    return chain


def is_monic_dominant(P: Polynomial) -> bool:
    """True for ``z^(n+1) + (terms of degree <= n)``.

    The leading power is either the polynomial's ``monic_leading`` or a single
    term ``1 * z^(n+1)`` whose degree strictly exceeds every other term.
    """
    live = [t for t in P.terms if not t.is_zero()]
    if P.monic_leading is not None:
        return all(t.degree < P.monic_leading for t in live)
    if not live:
        return False
    top = max(t.degree for t in live)
    leaders = [t for t in live if t.degree == top]
    if len(leaders) != 1 or top < 1:
        return False
    lead = leaders[0]
    one = CDNumber.real(P.level)
    return all(c.embed(P.level) == one for c in lead.coeffs)


# name used by the operation catalogue
is_theorem23_form = is_monic_dominant
