"""Left/right symmetries of polynomials and averaging over subgroups.

Two kinds of subgroup are supported: the circle ``{exp(t M) : t in [0, 2 pi)}``
for a unit imaginary ``M``, averaged with the trapezoid rule on ``nodes``
equally spaced parameters (exact for trigonometric polynomials of degree
below ``nodes / 2``), and an explicit finite group with the counting measure.
Both are probability measures, so constants are fixed by averaging.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .algebra import CDNumber, from_json, mul_arrays
from .errors import PreconditionError, SingularError
from .polynomial import Polynomial, degree, evaluate_arrays
from .transcendental import exp_arrays

@dataclass(frozen=True)
class CircleGroup:
    direction: CDNumber
    nodes: int

    def __post_init__(self) -> None:
        d = self.direction
        if abs(d.re) > 1e-12 or abs(d.norm() - 1.0) > 1e-9:
            raise PreconditionError("circle direction must be a unit imaginary element")
        if self.nodes < 1:
            raise PreconditionError("circle needs at least one node")

    @property
    def level(self) -> int:
        return self.direction.level

    def element(self, t: float) -> CDNumber:
        return CDNumber(exp_arrays(self.direction.coeffs * t))

    def element_arrays(self) -> np.ndarray:
        t = 2.0 * math.pi * np.arange(self.nodes) / self.nodes
        return exp_arrays(t[:, None] * self.direction.coeffs[None, :])

    def sample(self, rng: np.random.Generator, count: int) -> list[CDNumber]:
        return [self.element(float(t)) for t in rng.uniform(0.0, 2.0 * math.pi, count)]


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[CDNumber, ...]
    tol: float = 1e-10

    def __post_init__(self) -> None:
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        if not els:
            raise PreconditionError("a finite group needs at least one element")
        v = max(e.level for e in els)
        arr = np.array([e.embed(v).coeffs for e in els])
        object.__setattr__(self, "_arr", arr)

        def member(x: np.ndarray) -> bool:
            return bool(np.min(np.linalg.norm(arr - x, axis=1)) <= self.tol)

        for a in arr:
            if np.linalg.norm(a) == 0.0:
                raise PreconditionError("group elements must be invertible")
            inv = -a / (a @ a)
            inv[0] = a[0] / (a @ a)
            if not member(inv):
                raise PreconditionError("element set is not closed under inverses")
            for b in arr:
                if not member(mul_arrays(a, b)):
                    raise PreconditionError("element set is not closed under products")

    @property
    def level(self) -> int:
        return self._arr.shape[1].bit_length() - 1

    def element_arrays(self) -> np.ndarray:
        return self._arr

    def sample(self, rng: np.random.Generator, count: int) -> list[CDNumber]:
        return list(self.elements)


SubgroupSpec = Union[CircleGroup, FiniteGroup]


def quaternion_group(v: int = 2) -> FiniteGroup:
    """The eight-element group ``{+-1, +-i_1, +-i_2, +-i_3}`` embedded in level ``v``."""
    els = []
    for j in range(4):
        for s in (1.0, -1.0):
            c = np.zeros(1 << v)
            c[j] = s
            els.append(CDNumber(c))
    return FiniteGroup(tuple(els))


def _ball_samples(rng: np.random.Generator, count: int, n: int, radius: float) -> np.ndarray:
    d = rng.standard_normal((count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / n)
    return d * r[:, None]


@dataclass(frozen=True)
class SymmetryCheck:
    holds: bool
    max_deviation: float
    worst_point: CDNumber | None = field(default=None, repr=False)


def _symmetry_check(P: Polynomial, g: CDNumber, side: str, sample_count: int, radius: float, tol: float, seed: int) -> SymmetryCheck:
    if g.norm() == 0.0:
        raise SingularError("symmetry candidate must be invertible")
    rng = np.random.default_rng(seed)
    Z = _ball_samples(rng, sample_count, P.dim, radius)
    gv = np.broadcast_to(g.embed(P.level).coeffs, Z.shape)
    moved = mul_arrays(gv, Z) if side == "left" else mul_arrays(Z, gv)
    base = evaluate_arrays(P, Z)
    dev = np.linalg.norm(evaluate_arrays(P, moved) - base, axis=1)
    scaled = dev / (1.0 + np.linalg.norm(base, axis=1))
    worst = int(np.argmax(scaled))
    return SymmetryCheck(bool(scaled[worst] <= tol), float(dev[worst]), CDNumber(Z[worst]))


def is_left_symmetry(P: Polynomial, g: CDNumber, sample_count: int = 64, radius: float = 2.0, tol: float = 1e-10, seed: int = 0) -> SymmetryCheck:
    """Sampled test of ``P(g z) == P(z)``."""
    return _symmetry_check(P, g, "left", sample_count, radius, tol, seed)


def is_right_symmetry(P: Polynomial, g: CDNumber, sample_count: int = 64, radius: float = 2.0, tol: float = 1e-10, seed: int = 0) -> SymmetryCheck:
    """Sampled test of ``P(z g) == P(z)``."""
    return _symmetry_check(P, g, "right", sample_count, radius, tol, seed)


@dataclass(frozen=True)
class SymmetryWitness:
    g: CDNumber
    z0: CDNumber
    z1: CDNumber
    residuals: tuple[float, float, float, float]


class WitnessFailure(PreconditionError):
    def __init__(self, name: str, value: float, tol: float):
        super().__init__(f"{name} = {value:.3g} exceeds tolerance {tol:.3g}")
        self.name = name
        self.value = value


_RESIDUAL_NAMES = ("|P(z0)|", "|P(z1)|", "|g z0 - z1|", "|g^-1 z1 - z0|")


def relates_zero_pair(P: Polynomial, g: CDNumber, z0: CDNumber, z1: CDNumber, tol: float = 1e-9) -> SymmetryWitness:
    """Check that ``g`` carries the zero ``z0`` to the zero ``z1`` and back."""
    if g.norm() == 0.0:
        raise SingularError("g must be invertible")
    v = P.level
    g, z0, z1 = (x.embed(v) for x in (g, z0, z1))
    res = (
        float(np.linalg.norm(evaluate_arrays(P, z0.coeffs))),
        float(np.linalg.norm(evaluate_arrays(P, z1.coeffs))),
        (g * z0 - z1).norm(),
        (g.inverse() * z1 - z0).norm(),
    )
    for name, val in zip(_RESIDUAL_NAMES, res):
        if val > tol:
            raise WitnessFailure(name, val, tol)
    return SymmetryWitness(g, z0, z1, res)


def left_multiplier(z0: CDNumber, z1: CDNumber) -> CDNumber:
    """``z1 * z0^-1``; solves ``g z0 = z1`` whenever ``z0`` and ``z1`` share an associative subalgebra."""
    return z1 * z0.inverse()


class AveragedEvaluator:
    """``z -> mean over g in G of f(g z)`` for a polynomial or another evaluator."""

    def __init__(self, base: Polynomial | AveragedEvaluator, group: SubgroupSpec):
        self.base = base
        self.group = group
        self.level = base.level
        self.dim = 1 << self.level
        els = group.element_arrays()
        if els.shape[1] < self.dim:
            pad = np.zeros((els.shape[0], self.dim))
            pad[:, : els.shape[1]] = els
            els = pad
        elif els.shape[1] > self.dim:
            raise PreconditionError("group level exceeds polynomial level")
        self._elements = els

    def _base_arrays(self, Z: np.ndarray) -> np.ndarray:
        if isinstance(self.base, Polynomial):
            return evaluate_arrays(self.base, Z)
        return self.base.evaluate_arrays(Z)

    def evaluate_arrays(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=np.float64)
        G = self._elements.reshape((-1,) + (1,) * (Z.ndim - 1) + (self.dim,))
        moved = mul_arrays(np.broadcast_to(G, (G.shape[0],) + Z.shape), np.broadcast_to(Z, (G.shape[0],) + Z.shape))
        vals = self._base_arrays(moved)
        total = np.zeros(Z.shape)
        for k in range(vals.shape[0]):
            total = total + vals[k]
        return total / vals.shape[0]

    def __call__(self, z: CDNumber) -> CDNumber:
        return CDNumber(self.evaluate_arrays(z.embed(self.level).coeffs))


def _poly_degree(base: Polynomial | AveragedEvaluator) -> int:
    while isinstance(base, AveragedEvaluator):
        base = base.base
    return degree(base)


def average(P: Polynomial | AveragedEvaluator, G: SubgroupSpec) -> AveragedEvaluator:
    """Group average of ``P`` under left translation."""
    if isinstance(G, CircleGroup) and G.nodes < 2 * _poly_degree(P) + 2:
        raise PreconditionError(
            f"circle quadrature needs >= {2 * _poly_degree(P) + 2} nodes for degree {_poly_degree(P)}"
        )
    return AveragedEvaluator(P, G)


@dataclass(frozen=True)
class InvarianceReport:
    on_group_deviation: float
    left_deviation: float
    left_claimed: bool
    tol: float

    @property
    def on_group_ok(self) -> bool:
        return self.on_group_deviation <= self.tol

    @property
    def left_ok(self) -> bool | None:
        if not self.left_claimed:
            return None
        return self.left_deviation <= self.tol

    @property
    def passed(self) -> bool:
        return self.on_group_ok and self.left_ok is not False


def check_average_invariance(
    P: Polynomial, G: SubgroupSpec, samples: int = 16, tol: float = 1e-10, seed: int = 0, radius: float = 2.0
) -> InvarianceReport:
    """Measure constancy of the average on ``G`` and its left invariance under ``G``.

    Left invariance is only claimed in the quaternions (``v == 2``); at other
    levels the deviation is measured and reported with ``left_claimed=False``.
    """
    avg = average(P, G)
    rng = np.random.default_rng(seed)
    gs = G.sample(rng, samples)
    one = avg(CDNumber.real(avg.level))
    on_group = max((avg(g) - one).norm() for g in gs)
    Z = _ball_samples(rng, samples, avg.dim, radius)
    base = avg.evaluate_arrays(Z)
    left = 0.0
    for g in gs:
        gv = np.broadcast_to(g.embed(avg.level).coeffs, Z.shape)
        moved = avg.evaluate_arrays(mul_arrays(gv, Z))
        left = max(left, float(np.max(np.linalg.norm(moved - base, axis=1))))
    return InvarianceReport(on_group, left, avg.level == 2, tol)


# name used by the operation catalogue
check_theorem20_invariance = check_average_invariance


def parse_group_file(data: Sequence[Sequence[float]]) -> FiniteGroup:
    return FiniteGroup(tuple(from_json(list(row)) for row in data))
