"""n-th roots in Cayley-Dickson algebras.

For a non-real target the roots found here live in the complex slice of the
target. A real target has whole spheres of roots, one per admissible angle:
``|r|^(1/n) (cos phi + sin phi * M)`` with ``M`` any unit imaginary element.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import CDNumber
from .errors import PreconditionError, SingularError
from .numerics import jacobian_fd, kernel_dimension
from .transcendental import exp, int_pow, int_pow_arrays, polar

_REAL_TOL = 1e-14


@dataclass(frozen=True)
class RootSample:
    value: CDNumber
    branch_index: int
    direction: CDNumber | None

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_list(),
            "branch_index": self.branch_index,
            "direction": None if self.direction is None else self.direction.to_list(),
        }


def principal_nth_root(zeta: CDNumber, n: int, hint: CDNumber | None = None) -> CDNumber:
    if n < 1:
        raise PreconditionError("root order must be >= 1")
    if n == 1:
        return zeta
    p = polar(zeta, hint)
    return exp(p.M / n) * p.rho ** (1.0 / n)


def random_unit_imaginary(rng: np.random.Generator, v: int) -> CDNumber:
    """Uniform point on the unit sphere of the imaginary subspace."""
    if v < 1:
        raise PreconditionError("level 0 has no imaginary directions")
    c = np.zeros(1 << v)
    while True:
        g = rng.standard_normal((1 << v) - 1)
        ng = np.linalg.norm(g)
        if ng > 1e-12:
            break
    c[1:] = g / ng
    return CDNumber(c)


def _on_sphere(radius: float, angle: float, direction: CDNumber) -> CDNumber:
    return direction * (radius * math.sin(angle)) + radius * math.cos(angle)


def nth_root_family(
    zeta: CDNumber,
    n: int,
    samples: int = 8,
    rng: np.random.Generator | None = None,
) -> list[RootSample]:
    """Discrete slice roots of a non-real target, or sphere samples for a real one.

    For real ``zeta`` each admissible angle in ``(0, pi)`` is paired with
    ``samples`` random directions; angles 0 and pi give a single real root.
    """
    if n < 1:
        raise PreconditionError("root order must be >= 1")
    rho = zeta.norm()
    if rho == 0.0:
        raise SingularError("roots of zero are not sampled")
    radius = rho ** (1.0 / n)
    v = zeta.level
    imag = zeta.im
    if imag.norm() > _REAL_TOL * rho:
        p = polar(zeta)
        direction = p.direction
        out = []
        for j in range(n):
            angle = (p.theta + 2.0 * math.pi * j) / n
            out.append(RootSample(_on_sphere(radius, angle, direction), j, direction))
        return out
    rng = rng if rng is not None else np.random.default_rng(0)
    offset = 0.0 if zeta.re > 0 else math.pi
    out = []
    k = 0
    while True:
        angle = (offset + 2.0 * math.pi * k) / n
        if angle > math.pi + 1e-12:
            break
        if angle < 1e-12:
            out.append(RootSample(CDNumber.real(v, radius), k, None))
        elif abs(angle - math.pi) < 1e-12:
            out.append(RootSample(CDNumber.real(v, -radius), k, None))
        else:
            for _ in range(samples):
                d = random_unit_imaginary(rng, v)
                out.append(RootSample(_on_sphere(radius, angle, d), k, d))
        k += 1
    return out


def root_residual(zeta: CDNumber, n: int, z: CDNumber) -> float:
    return (int_pow(z, n) - zeta).norm()


def root_manifold_dimension(
    zeta: CDNumber, n: int, sample: CDNumber, threshold_ratio: float = 1e-6, tol: float = 1e-9
) -> int:
    """Kernel dimension of ``z -> z^n - zeta`` at a verified root."""
    if root_residual(zeta, n, sample) > tol * (1.0 + zeta.norm()):
        raise PreconditionError("sample is not an n-th root of zeta")
    x = sample.embed(max(sample.level, zeta.level)).coeffs
    J = jacobian_fd(lambda pts: int_pow_arrays(pts, n), x)
    kdim, _ = kernel_dimension(J, threshold_ratio)
    return kdim


def slice_residual(z: CDNumber, direction: CDNumber) -> float:
    """Distance from ``z`` to ``span{1, direction}`` (``direction`` a unit imaginary)."""
    c = z.coeffs.copy()
    d = direction.coeffs
    c[0] = 0.0
    c = c - (c @ d) * d
    return float(np.linalg.norm(c))
