"""Exponential, logarithm, polar form and integer powers.

Every element ``a + M`` (``a`` real, ``M`` purely imaginary) lives in the
complex slice ``span{1, M/|M|}``, so these functions reduce to their complex
counterparts there:

    exp(a + M) = e^a (cos|M| + sin|M|/|M| * M)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import CDNumber, mul_arrays
from .errors import AmbiguousDirectionError, PreconditionError, SingularError

_SINC_SERIES_CUTOFF = 1e-4


def sinc(t: float) -> float:
    """``sin(t)/t`` with a short Taylor series near zero."""
    if abs(t) < _SINC_SERIES_CUTOFF:
        t2 = t * t
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0
    return math.sin(t) / t


def sinc_array(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    small = np.abs(t) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, t)
    t2 = t * t
    series = 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0
    return np.where(small, series, np.sin(safe) / safe)


def exp_arrays(z: np.ndarray) -> np.ndarray:
    """Batched exponential of raw coefficient arrays."""
    z = np.asarray(z, dtype=np.float64)
    a = z[..., :1]
    m = z.copy()
    m[..., 0] = 0.0
    theta = np.linalg.norm(m, axis=-1, keepdims=True)
    out = sinc_array(theta) * m
    out[..., 0] = np.cos(theta[..., 0])
    return np.exp(a) * out


def exp(z: CDNumber) -> CDNumber:
    return CDNumber(exp_arrays(z.coeffs))


@dataclass(frozen=True)
class PolarForm:
    """``z = rho * exp(M)`` with ``rho >= 0`` and ``M`` purely imaginary, ``|M| <= pi``."""

    rho: float
    M: CDNumber

    @property
    def theta(self) -> float:
        return self.M.norm()

    @property
    def direction(self) -> CDNumber | None:
        t = self.theta
        return None if t == 0.0 else self.M / t

    def reconstruct(self) -> CDNumber:
        return exp(self.M) * self.rho


def _unit_direction(hint: CDNumber, v: int) -> CDNumber:
    hint = hint.embed(max(v, hint.level)) if hint.level < v else hint
    d = hint.im
    nd = d.norm()
    if nd == 0.0:
        raise PreconditionError("direction hint must have a nonzero imaginary part")
    return d / nd


def polar(z: CDNumber, hint: CDNumber | None = None) -> PolarForm:
    """Principal polar decomposition (angle in ``[0, pi]``).

    A negative real ``z`` has a whole sphere of valid directions; ``hint``
    picks one (its imaginary part is normalised). Without a hint this raises
    :class:`AmbiguousDirectionError`.
    """
    rho = z.norm()
    if rho == 0.0:
        raise SingularError("polar form of zero is undefined")
    imag = z.im
    r_im = imag.norm()
    theta = math.atan2(r_im, z.re)
    if r_im > 0.0:
        return PolarForm(rho, imag * (theta / r_im))
    if z.re > 0.0:
        return PolarForm(rho, CDNumber.zero(z.level))
    if hint is None:
        raise AmbiguousDirectionError("negative real input: pass a direction hint")
    return PolarForm(rho, _unit_direction(hint, z.level) * math.pi)


def log(z: CDNumber, hint: CDNumber | None = None) -> CDNumber:
    p = polar(z, hint)
    return p.M + math.log(p.rho)


def int_pow_arrays(z: np.ndarray, k: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.zeros_like(z)
    out[..., 0] = 1.0
    for _ in range(k):
        out = mul_arrays(out, z)
    return out


def int_pow(z: CDNumber, k: int) -> CDNumber:
    """``z**k`` by repeated right multiplication; ``z**0 = 1``."""
    if k < 0:
        return int_pow(z.inverse(), -k)
    return CDNumber(int_pow_arrays(z.coeffs, k))
