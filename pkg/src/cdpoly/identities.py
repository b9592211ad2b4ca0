"""Closed forms for commutators and anticommutators of exponentials.

For purely imaginary ``M`` and ``N`` split ``N = N1 + N2`` with ``N1 = beta M``
and ``N2`` orthogonal to ``M``. Then, writing ``s(X) = sin|X| / |X|``,

    [e^M, e^N] = 2 s(M) s(N) M N2
    {e^M, e^N} = 2 cos|M| e^N + 2 s(M) M (cos|N| + s(N) N1)

Each formula here is evaluated independently of the direct product so that
the two can be compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import CDNumber, mul, mul_arrays, unify
from .errors import PreconditionError, SingularError
from .transcendental import exp, exp_arrays, sinc

_IMAG_TOL = 1e-12


def _require_imaginary(*xs: CDNumber) -> None:
    for x in xs:
        if abs(x.re) > _IMAG_TOL * max(1.0, x.norm()):
            raise PreconditionError("argument must be purely imaginary")


@dataclass(frozen=True)
class ParallelOrthogonalSplit:
    N1: CDNumber
    N2: CDNumber
    beta: float


def split_parallel_orthogonal(N: CDNumber, M: CDNumber) -> ParallelOrthogonalSplit:
    """Split ``N`` into a multiple of ``M`` and a part orthogonal to ``M``."""
    N, M = unify(N, M)
    _require_imaginary(N, M)
    m2 = M.norm_sq()
    if m2 == 0.0:
        raise SingularError("cannot split against a zero direction")
    beta = float(N.coeffs @ M.coeffs) / m2
    N1 = M * beta
    return ParallelOrthogonalSplit(N1, N - N1, beta)


def commutator(x: CDNumber, y: CDNumber) -> CDNumber:
    return mul(x, y) - mul(y, x)


def anticommutator(x: CDNumber, y: CDNumber) -> CDNumber:
    return mul(x, y) + mul(y, x)


def _nonzero(*xs: CDNumber) -> None:
    for x in xs:
        if x.norm() == 0.0:
            raise SingularError("closed form needs nonzero arguments")


def commutator_closed_form(M: CDNumber, N: CDNumber) -> CDNumber:
    M, N = unify(M, N)
    _nonzero(M, N)
    split = split_parallel_orthogonal(N, M)
    return mul(M, split.N2) * (2.0 * sinc(M.norm()) * sinc(N.norm()))


def commutator_orthogonal_closed_form(M: CDNumber, N: CDNumber, tol: float = 1e-10) -> CDNumber:
    """Commutator of ``e^M`` and ``e^N`` for orthogonal ``M`` and ``N``."""
    M, N = unify(M, N)
    _require_imaginary(M, N)
    if abs(float(M.coeffs @ N.coeffs)) > tol * max(1.0, M.norm() * N.norm()):
        raise PreconditionError("M and N are not orthogonal")
    return mul(M, N) * (2.0 * sinc(M.norm()) * sinc(N.norm()))


def anticommutator_closed_form(M: CDNumber, N: CDNumber) -> CDNumber:
    M, N = unify(M, N)
    _nonzero(M, N)
    split = split_parallel_orthogonal(N, M)
    a, b = M.norm(), N.norm()
    inner = split.N1 * sinc(b) + math.cos(b)
    return exp(N) * (2.0 * math.cos(a)) + mul(M, inner) * (2.0 * sinc(a))


def _near_multiple(angle: float, period: float, offset: float, tol: float) -> bool:
    x = (angle - offset) / period
    dist = abs(x - round(x)) * period
    return dist <= tol * (1.0 + abs(angle))


def commute_predicate(M: CDNumber, N: CDNumber, tol: float = 1e-9) -> bool:
    """True iff ``e^M`` and ``e^N`` commute, decided from norms and directions."""
    M, N = unify(M, N)
    _require_imaginary(M, N)
    if _near_multiple(M.norm(), math.pi, 0.0, tol) or _near_multiple(N.norm(), math.pi, 0.0, tol):
        return True
    N2 = split_parallel_orthogonal(N, M).N2
    return mul(M, N2).norm() <= tol


def _anticommute_branch(M: CDNumber, N: CDNumber, tol: float) -> bool:
    if M.norm() == 0.0:
        return False
    split = split_parallel_orthogonal(N, M)
    return (
        split.N1.norm() <= tol
        and _near_multiple(split.N2.norm(), math.pi, math.pi / 2, tol)
        and _near_multiple(M.norm(), math.pi, math.pi / 2, tol)
    )


def anticommute_predicate(M: CDNumber, N: CDNumber, tol: float = 1e-9) -> bool:
    """True iff ``e^M`` and ``e^N`` anticommute, decided from norms and directions."""
    M, N = unify(M, N)
    _require_imaginary(M, N)
    return _anticommute_branch(M, N, tol) or _anticommute_branch(N, M, tol)


def conjugate_to_real(K: CDNumber) -> CDNumber:
    """An ``N`` with ``e^N (e^K e^N)`` real, namely ``-K/2``."""
    _require_imaginary(K)
    return K * -0.5


def psi_residual(K: CDNumber, N: CDNumber) -> CDNumber:
    """Imaginary part of ``e^N (e^K e^N)``."""
    K, N = unify(K, N)
    eN = exp(N)
    return mul(eN, mul(exp(K), eN)).im


def psi_residual_arrays(K: CDNumber, N: np.ndarray) -> np.ndarray:
    """Batched :func:`psi_residual` over imaginary coefficient rows ``N[..., 1:]``."""
    full = np.zeros(N.shape[:-1] + (K.dim,))
    full[..., 1:] = N
    eN = exp_arrays(full)
    eK = np.broadcast_to(exp(K).coeffs, eN.shape)
    out = mul_arrays(eN, mul_arrays(eK, eN))
    return out[..., 1:]


# ---------------------------------------------------------------------------
# randomized sweeps


def random_imaginary(rng: np.random.Generator, v: int, lo: float = 0.1, hi: float = 3.0) -> CDNumber:
    """Purely imaginary element with uniform direction and norm in ``[lo, hi)``."""
    c = np.zeros(1 << v)
    g = rng.standard_normal((1 << v) - 1)
    c[1:] = g / np.linalg.norm(g) * rng.uniform(lo, hi)
    return CDNumber(c)


def _orthogonalize(N: CDNumber, M: CDNumber) -> CDNumber:
    N2 = split_parallel_orthogonal(N, M).N2
    return N2 * (N.norm() / N2.norm())


@dataclass(frozen=True)
class SweepResult:
    lemma: int
    level: int
    trials: int
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "level": self.level,
            "trials": self.trials,
            "max_error": self.max_error,
            "tol": self.tol,
            "pass": self.passed,
        }


def sweep_lemma(lemma: int, level: int, trials: int, seed: int = 0, tol: float = 1e-9) -> SweepResult:
    """Largest discrepancy between a closed form and direct multiplication.

    ``lemma`` selects the identity: 9 (commutator), 11 (orthogonal
    commutator), 12 (anticommutator) or 14 (``N = -K/2`` makes
    ``e^N (e^K e^N)`` real; the error is the norm of the imaginary part).
    """
    if level < 2:
        raise PreconditionError("identity sweeps need level >= 2")
    rng = np.random.default_rng([seed, lemma, level])
    worst = 0.0
    for _ in range(trials):
        M = random_imaginary(rng, level)
        N = random_imaginary(rng, level)
        if lemma == 9:
            err = (commutator_closed_form(M, N) - commutator(exp(M), exp(N))).norm()
        elif lemma == 11:
            N = _orthogonalize(N, M)
            err = (commutator_orthogonal_closed_form(M, N) - commutator(exp(M), exp(N))).norm()
        elif lemma == 12:
            err = (anticommutator_closed_form(M, N) - anticommutator(exp(M), exp(N))).norm()
        elif lemma == 14:
            Nc = conjugate_to_real(M)
            err = psi_residual(M, Nc).norm()
        else:
            raise PreconditionError(f"no identity sweep for lemma {lemma}")
        worst = max(worst, err)
    return SweepResult(lemma, level, trials, worst, tol)
