"""Noncommutative, nonassociative polynomials with explicit bracketing.

A term ``{a_1 z^k_1 a_2 z^k_2 ... a_m z^k_m}`` is a product of ``2m`` factors
in that fixed order. Because the algebra is not associative, the term also
carries a binary tree saying how the factors are grouped. Leaves of the tree
are factor positions ``0 .. 2m-1`` (even positions are coefficients, odd
positions are powers of ``z``). The token ``"left"`` means the left fold
``(((a_1 z^k_1) a_2) z^k_2) ...``.

A right-hand coefficient, as in ``z^2 a``, is written as the pair
``(1, z^2), (a, z^0)``.

File format (UTF-8 JSON)::

    {"level": 2,
     "monic_leading": 3,                      # optional, adds z^3
     "terms": [{"coeffs": [[0, 1, 0, 0]], "exps": [1], "order": "left"},
               {"coeffs": [[2, 0, 0, 0]], "exps": [0]}]}
"""
from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .algebra import CDNumber, level_of_dim, mul_arrays
from .errors import SchemaError, StructureError


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Node:
    left: "MulTree"
    right: "MulTree"


MulTree = Union[Leaf, Node]
Order = Union[MulTree, str]


def leaves(tree: MulTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.index]
    return leaves(tree.left) + leaves(tree.right)


def left_tree(size: int) -> MulTree:
    tree: MulTree = Leaf(0)
    for i in range(1, size):
        tree = Node(tree, Leaf(i))
    return tree


def right_tree(size: int) -> MulTree:
    tree: MulTree = Leaf(size - 1)
    for i in range(size - 2, -1, -1):
        tree = Node(Leaf(i), tree)
    return tree


def all_trees(lo: int, hi: int) -> list[MulTree]:
    """Every bracketing of the factor positions ``lo .. hi-1`` (Catalan many)."""
    if hi - lo == 1:
        return [Leaf(lo)]
    out: list[MulTree] = []
    for mid in range(lo + 1, hi):
        for a in all_trees(lo, mid):
            for b in all_trees(mid, hi):
                out.append(Node(a, b))
    return out


def tree_from_json(obj, path: str = "order") -> MulTree:
    if isinstance(obj, bool):
        raise StructureError(f"{path}: leaves must be integers")
    if isinstance(obj, int):
        return Leaf(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return Node(tree_from_json(obj[0], path + "[0]"), tree_from_json(obj[1], path + "[1]"))
    raise StructureError(f"{path}: expected an integer leaf or a two-element array")


def tree_to_json(tree: MulTree):
    if isinstance(tree, Leaf):
        return tree.index
    return [tree_to_json(tree.left), tree_to_json(tree.right)]


@dataclass(frozen=True)
class Term:
    coeffs: tuple[CDNumber, ...]
    exps: tuple[int, ...]
    order: Order = "left"

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "exps", tuple(int(k) for k in self.exps))
        if len(self.coeffs) != len(self.exps) or not self.coeffs:
            raise StructureError("a term needs equally many (>= 1) coefficients and exponents")
        if any(k < 0 for k in self.exps):
            raise StructureError("exponents must be nonnegative")
        if isinstance(self.order, str):
            if self.order != "left":
                raise StructureError(f"unknown order token {self.order!r}")
        else:
            got = leaves(self.order)
            if got != list(range(2 * len(self.coeffs))):
                raise StructureError(
                    f"order tree leaves {got} must be 0..{2 * len(self.coeffs) - 1} in order"
                )

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def is_zero(self) -> bool:
        return any(c.norm() == 0.0 for c in self.coeffs)

    def tree(self) -> MulTree:
        return left_tree(2 * self.m) if isinstance(self.order, str) else self.order

    def with_order(self, order: Order) -> Term:
        return Term(self.coeffs, self.exps, order)


@dataclass(frozen=True)
class Polynomial:
    level: int
    terms: tuple[Term, ...]
    monic_leading: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            for c in t.coeffs:
                if c.level > self.level:
                    raise SchemaError(f"coefficient of level {c.level} exceeds polynomial level {self.level}")
        if self.monic_leading is not None and self.monic_leading < 1:
            raise SchemaError("monic_leading must be >= 1")

    @property
    def dim(self) -> int:
        return 1 << self.level

    def __call__(self, z: CDNumber) -> CDNumber:
        return evaluate(self, z)

    def coefficient_mass(self) -> float:
        """Sum of coefficient norms (used to size the search ball)."""
        return sum(c.norm() for t in self.terms for c in t.coeffs)


def term(coeffs: Sequence[CDNumber | float], exps: Sequence[int], order: Order = "left", level: int = 0) -> Term:
    cs = tuple(c if isinstance(c, CDNumber) else CDNumber.real(level, float(c)) for c in coeffs)
    return Term(cs, tuple(exps), order)


def from_dense(level: int, coeffs: Sequence[CDNumber | float], monic_leading: int | None = None) -> Polynomial:
    """``sum_k coeffs[k] z^k`` with left coefficients; zero entries are skipped."""
    terms = []
    for k, c in enumerate(coeffs):
        c = c if isinstance(c, CDNumber) else CDNumber.real(level, float(c))
        if c.norm() != 0.0:
            terms.append(Term((c,), (k,)))
    return Polynomial(level, tuple(terms), monic_leading)


# ---------------------------------------------------------------------------
# evaluation


def _fold(tree: MulTree, factors: list[np.ndarray]) -> np.ndarray:
    if isinstance(tree, Leaf):
        return factors[tree.index]
    return mul_arrays(_fold(tree.left, factors), _fold(tree.right, factors))


def evaluate_arrays(P: Polynomial, Z: np.ndarray) -> np.ndarray:
    """Evaluate ``P`` on a batch of coefficient rows ``Z`` of shape ``(..., 2**v)``."""
    Z = np.asarray(Z, dtype=np.float64)
    n = P.dim
    if Z.shape[-1] != n:
        raise SchemaError(f"point has {Z.shape[-1]} coefficients, level {P.level} needs {n}")
    needed = {k for t in P.terms for k in t.exps}
    if P.monic_leading is not None:
        needed.add(P.monic_leading)
    powers: dict[int, np.ndarray] = {}
    one = np.zeros_like(Z)
    one[..., 0] = 1.0
    cur = one
    powers[0] = one
    top = max(needed) if needed else 0
    for k in range(1, top + 1):
        cur = mul_arrays(cur, Z)
        powers[k] = cur
    out = np.zeros_like(Z)
    if P.monic_leading is not None:
        out = out + powers[P.monic_leading]
    for t in P.terms:
        factors: list[np.ndarray] = []
        for c, k in zip(t.coeffs, t.exps):
            cv = np.zeros(n)
            cv[: c.dim] = c.coeffs
            factors.append(np.broadcast_to(cv, Z.shape))
            factors.append(powers[k])
        out = out + _fold(t.tree(), factors)
    return out


def evaluate(P: Polynomial, z: CDNumber) -> CDNumber:
    if z.level > P.level:
        raise SchemaError(f"point of level {z.level} exceeds polynomial level {P.level}")
    return CDNumber(evaluate_arrays(P, z.embed(P.level).coeffs))


def degree(P: Polynomial) -> int:
    degs = [t.degree for t in P.terms if not t.is_zero()]
    if P.monic_leading is not None:
        degs.append(P.monic_leading)
    return max(degs, default=0)


# ---------------------------------------------------------------------------
# restriction to a complex slice


@dataclass(frozen=True)
class SliceRestriction:
    """Outcome of restricting ``P`` to ``span{1, direction}``.

    ``coefficients`` holds complex coefficients in increasing degree when the
    slice is closed; otherwise ``offending`` lists ``(term, factor)`` positions
    whose coefficient leaves the slice.
    """

    closed: bool
    coefficients: np.ndarray | None = None
    offending: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def restrict_to_slice(P: Polynomial, direction: CDNumber, tol: float = 1e-12) -> SliceRestriction:
    d = direction.embed(P.level) if direction.level < P.level else direction
    if abs(d.re) > tol or abs(d.norm() - 1.0) > 1e-9:
        raise SchemaError("slice direction must be a unit purely imaginary element")
    dv = d.coeffs
    coeffs = np.zeros(degree(P) + 1, dtype=complex)
    if P.monic_leading is not None:
        coeffs[P.monic_leading] += 1.0
    offending = []
    for ti, t in enumerate(P.terms):
        prod = 1.0 + 0.0j
        for fi, c in enumerate(t.coeffs):
            cv = c.embed(P.level).coeffs
            x, y = cv[0], float(cv @ dv)
            resid = cv.copy()
            resid[0] = 0.0
            resid = resid - y * dv
            if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(cv)):
                offending.append((ti, fi))
            prod *= complex(x, y)
        if t.degree < coeffs.shape[0]:
            coeffs[t.degree] += prod
    if offending:
        return SliceRestriction(False, None, tuple(offending))
    return SliceRestriction(True, coeffs)


# ---------------------------------------------------------------------------
# serialisation


def to_dict(P: Polynomial) -> dict:
    out: dict = {"level": P.level}
    if P.monic_leading is not None:
        out["monic_leading"] = P.monic_leading
    terms = []
    for t in P.terms:
        terms.append({
            "coeffs": [c.embed(P.level).to_list() for c in t.coeffs],
            "exps": list(t.exps),
            "order": t.order if isinstance(t.order, str) else tree_to_json(t.order),
        })
    out["terms"] = terms
    return out


def serialize(P: Polynomial) -> str:
    return json.dumps(to_dict(P))


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def from_dict(data) -> Polynomial:
    if not isinstance(data, dict):
        raise SchemaError("polynomial file must hold a JSON object")
    unknown = set(data) - {"level", "terms", "monic_leading"}
    if unknown:
        raise SchemaError(f"unknown fields {sorted(unknown)}")
    level = data.get("level")
    if not isinstance(level, int) or isinstance(level, bool) or level < 0:
        raise SchemaError("level: expected a nonnegative integer")
    monic = data.get("monic_leading")
    if monic is not None and (not isinstance(monic, int) or isinstance(monic, bool) or monic < 1):
        raise SchemaError("monic_leading: expected a positive integer")
    raw_terms = data.get("terms")
    if not isinstance(raw_terms, list):
        raise SchemaError("terms: expected an array")
    n = 1 << level
    terms = []
    for ti, raw in enumerate(raw_terms):
        where = f"terms[{ti}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{where}: expected an object")
        extra = set(raw) - {"coeffs", "exps", "order"}
        if extra:
            raise SchemaError(f"{where}: unknown fields {sorted(extra)}")
        rc, re_ = raw.get("coeffs"), raw.get("exps")
        if not isinstance(rc, list) or not isinstance(re_, list):
            raise SchemaError(f"{where}: coeffs and exps must be arrays")
        if len(rc) != len(re_) or not rc:
            raise StructureError(f"{where}: coeffs and exps must have equal nonzero length")
        cs = []
        for ci, c in enumerate(rc):
            cw = f"{where}.coeffs[{ci}]"
            if not isinstance(c, list) or not all(_is_real(x) for x in c):
                raise SchemaError(f"{cw}: expected an array of reals")
            try:
                cl = level_of_dim(len(c))
            except SchemaError as exc:
                raise SchemaError(f"{cw}: {exc}") from None
            if cl > level:
                raise SchemaError(f"{cw}: length {len(c)} exceeds 2^level = {n}")
            cs.append(CDNumber(np.asarray(c, dtype=np.float64)).embed(level))
        for ei, k in enumerate(re_):
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise SchemaError(f"{where}.exps[{ei}]: expected a nonnegative integer")
        order_raw = raw.get("order", "left")
        if isinstance(order_raw, str):
            order: Order = order_raw
        else:
            order = tree_from_json(order_raw, f"{where}.order")
        try:
            terms.append(Term(tuple(cs), tuple(re_), order))
        except StructureError as exc:
            raise StructureError(f"{where}: {exc}") from None
    return Polynomial(level, tuple(terms), monic)


def parse(text: str) -> Polynomial:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def load(path) -> Polynomial:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(P: Polynomial, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(P))
        fh.write("\n")


def random_monic_polynomial(
    rng: np.random.Generator,
    level: int,
    max_degree: int = 4,
    max_factors: int = 2,
    max_terms: int = 3,
) -> Polynomial:
    """``z^d`` plus random lower terms with random bracketings.

    ``d`` is drawn from ``1..max_degree``. Each lower term has ``m <= max_factors``
    factor pairs, total degree ``eta <= d - 1`` and ``m <= eta + 1``; every
    coefficient coordinate is uniform on ``[-1, 1]``.
    """
    d = int(rng.integers(1, max_degree + 1))
    n = 1 << level
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        while True:
            m = int(rng.integers(1, max_factors + 1))
            exps = [int(k) for k in rng.integers(0, d, size=m)]
            if sum(exps) <= d - 1 and m <= sum(exps) + 1:
                break
        coeffs = tuple(CDNumber(rng.uniform(-1.0, 1.0, n)) for _ in range(m))
        trees = all_trees(0, 2 * m)
        order = trees[int(rng.integers(len(trees)))]
        terms.append(Term(coeffs, tuple(exps), order))
    return Polynomial(level, tuple(terms), monic_leading=d)
