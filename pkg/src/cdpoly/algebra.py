"""Cayley-Dickson algebras of arbitrary finite level.

An element of level ``v`` is stored as a real coefficient vector of length
``2**v``; index ``j`` is the coefficient of the generator ``i_j`` (``i_0 = 1``).
The doubling convention used throughout is

    (a, b) * (c, d) = (a c - d* b,  d a + b c*),      (a, b)* = (a*, -b)

With this rule the product of two generators is always a signed generator,
``i_j i_k = s(j, k) i_{j XOR k}``, so the whole multiplication is encoded by a
cached table of signs. Dense products are evaluated by gathering from that
table; above ``_TABLE_MAX_LEVEL`` the doubling formula is applied recursively
until the halves are small enough for the table.
"""
from __future__ import annotations

import itertools
import json
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import SchemaError, SingularError, UnsupportedLevelError

MAX_LEVEL = 16
_TABLE_MAX_LEVEL = 9
# elements per einsum chunk when multiplying batches
_CHUNK_ENTRIES = 1 << 22

ARITH_TOL = 1e-12
TRANSCENDENTAL_TOL = 1e-9

Scalar = Union[int, float, np.floating, np.integer]

_table_lock = threading.Lock()


def _check_level(v: int) -> int:
    v = int(v)
    if v < 0 or v > MAX_LEVEL:
        raise UnsupportedLevelError(f"level must lie in [0, {MAX_LEVEL}], got {v}")
    return v


def level_of_dim(n: int) -> int:
    """Return ``v`` with ``2**v == n`` or raise :class:`SchemaError`."""
    if n < 1 or n & (n - 1):
        raise SchemaError(f"coefficient length {n} is not a power of two")
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# basis product table


@lru_cache(maxsize=None)
def _sign_table_cached(v: int) -> np.ndarray:
    if v == 0:
        return np.ones((1, 1), dtype=np.int8)
    prev = _sign_table_cached(v - 1)
    h = prev.shape[0]
    conj_sign = np.full(h, -1, dtype=np.int8)
    conj_sign[0] = 1
    t = np.empty((2 * h, 2 * h), dtype=np.int8)
    # (a,0)(c,0) = (ac, 0)
    t[:h, :h] = prev
    # (a,0)(0,d) = (0, d a)
    t[:h, h:] = prev.T
    # (0,b)(c,0) = (0, b c*)
    t[h:, :h] = prev * conj_sign[None, :]
    # (0,b)(0,d) = (-d* b, 0)
    t[h:, h:] = -(prev.T * conj_sign[None, :])
    t.setflags(write=False)
    return t


def sign_table(v: int) -> np.ndarray:
    """Read-only ``int8`` matrix ``S`` with ``i_j i_k = S[j, k] i_{j ^ k}``."""
    v = _check_level(v)
    if v > _TABLE_MAX_LEVEL + 2:
        raise UnsupportedLevelError(f"explicit sign table not materialised above level {_TABLE_MAX_LEVEL + 2}")
    with _table_lock:
        return _sign_table_cached(v)


def basis_product(v: int, j: int, k: int) -> tuple[int, int]:
    """Return ``(index, sign)`` such that ``i_j * i_k = sign * i_index`` in level ``v``."""
    n = 1 << v
    if not (0 <= j < n and 0 <= k < n):
        raise SchemaError(f"basis indices ({j}, {k}) out of range for level {v}")
    return j ^ k, int(sign_table(v)[j, k])


@lru_cache(maxsize=None)
def _left_gather(v: int) -> tuple[np.ndarray, np.ndarray]:
    # (x y)[m] = sum_k x[m^k] * S[m^k, k] * y[k]
    n = 1 << v
    m = np.arange(n)
    idx = m[:, None] ^ m[None, :]
    signs = sign_table(v)[idx, m[None, :]].astype(np.float64)
    idx.setflags(write=False)
    signs.setflags(write=False)
    return idx, signs


def left_matrix(x: np.ndarray) -> np.ndarray:
    """Matrix of ``y -> x y`` acting on coefficient vectors (batched over leading axes)."""
    x = np.asarray(x, dtype=np.float64)
    v = level_of_dim(x.shape[-1])
    idx, signs = _left_gather(v)
    return x[..., idx] * signs


def _mul_table(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    v = level_of_dim(x.shape[-1])
    n = 1 << v
    idx, signs = _left_gather(v)
    if x.ndim == 1:
        return (x[idx] * signs) @ y
    flat_x = x.reshape(-1, n)
    flat_y = y.reshape(-1, n)
    out = np.empty_like(flat_x)
    step = max(1, _CHUNK_ENTRIES // (n * n))
    for s in range(0, flat_x.shape[0], step):
        lx = flat_x[s:s + step, idx] * signs
        out[s:s + step] = np.einsum("bmk,bk->bm", lx, flat_y[s:s + step])
    return out.reshape(x.shape)


def _conj_arr(x: np.ndarray) -> np.ndarray:
    out = -x
    out[..., 0] = x[..., 0]
    return out


def _mul_doubling(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    h = x.shape[-1] // 2
    a, b = x[..., :h], x[..., h:]
    c, d = y[..., :h], y[..., h:]
    first = mul_arrays(a, c) - mul_arrays(_conj_arr(d), b)
    second = mul_arrays(d, a) + mul_arrays(b, _conj_arr(c))
    return np.concatenate([first, second], axis=-1)


def mul_arrays(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cayley-Dickson product of raw coefficient arrays.

    Both arguments must share the trailing dimension ``2**v``; leading axes
    broadcast, so a batch of points can be multiplied in one call.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[-1] != y.shape[-1]:
        n = max(x.shape[-1], y.shape[-1])
        x = _pad(x, n)
        y = _pad(y, n)
    if x.shape[:-1] != y.shape[:-1]:
        x, y = np.broadcast_arrays(x, y)
    v = level_of_dim(x.shape[-1])
    if v > MAX_LEVEL:
        raise UnsupportedLevelError(f"level {v} exceeds {MAX_LEVEL}")
    if v <= _TABLE_MAX_LEVEL:
        return _mul_table(x, y)
    return _mul_doubling(x, y)


def mul_doubling_reference(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Plain recursive doubling product, independent of the sign table.

    Kept as an oracle for the table-driven path.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[-1] == 1:
        return x * y
    h = x.shape[-1] // 2
    a, b = x[..., :h], x[..., h:]
    c, d = y[..., :h], y[..., h:]
    first = mul_doubling_reference(a, c) - mul_doubling_reference(_conj_arr(d), b)
    second = mul_doubling_reference(d, a) + mul_doubling_reference(b, _conj_arr(c))
    return np.concatenate([first, second], axis=-1)


def _pad(x: np.ndarray, n: int) -> np.ndarray:
    if x.shape[-1] == n:
        return x
    out = np.zeros(x.shape[:-1] + (n,), dtype=np.float64)
    out[..., : x.shape[-1]] = x
    return out


# ---------------------------------------------------------------------------
# the element type


@dataclass(frozen=True, eq=False)
class CDNumber:
    """Immutable element of the Cayley-Dickson algebra of level ``level``."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise SchemaError(f"coefficients must be a flat vector, got shape {arr.shape}")
        v = level_of_dim(arr.shape[0])
        if v > MAX_LEVEL:
            raise UnsupportedLevelError(f"level {v} exceeds {MAX_LEVEL}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # construction -----------------------------------------------------------

    @classmethod
    def basis(cls, v: int, j: int) -> CDNumber:
        n = 1 << _check_level(v)
        if not 0 <= j < n:
            raise SchemaError(f"basis index {j} out of range for level {v}")
        c = np.zeros(n)
        c[j] = 1.0
        return cls(c)

    @classmethod
    def real(cls, v: int, x: float = 1.0) -> CDNumber:
        c = np.zeros(1 << _check_level(v))
        c[0] = x
        return cls(c)

    @classmethod
    def zero(cls, v: int) -> CDNumber:
        return cls(np.zeros(1 << _check_level(v)))

    # structure --------------------------------------------------------------

    @property
    def level(self) -> int:
        return self.coeffs.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def embed(self, v: int) -> CDNumber:
        """Zero-pad into level ``v`` (``v >= self.level``)."""
        if v < self.level:
            raise UnsupportedLevelError(f"cannot embed level {self.level} into lower level {v}")
        if v == self.level:
            return self
        return CDNumber(_pad(self.coeffs, 1 << _check_level(v)))

    # scalar quantities ------------------------------------------------------

    @property
    def re(self) -> float:
        return float(self.coeffs[0])

    @property
    def im(self) -> CDNumber:
        c = self.coeffs.copy()
        c[0] = 0.0
        return CDNumber(c)

    def norm_sq(self) -> float:
        return float(self.coeffs @ self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def conj(self) -> CDNumber:
        return CDNumber(_conj_arr(self.coeffs))

    def inverse(self, tol: float = 0.0) -> CDNumber:
        n2 = self.norm_sq()
        if n2 <= tol * tol or n2 == 0.0:
            raise SingularError("cannot invert a zero element")
        return CDNumber(_conj_arr(self.coeffs) / n2)

    def is_real(self, tol: float = ARITH_TOL) -> bool:
        return float(np.linalg.norm(self.coeffs[1:])) <= tol

    def is_imaginary(self, tol: float = ARITH_TOL) -> bool:
        return abs(self.coeffs[0]) <= tol

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> tuple[np.ndarray, np.ndarray] | None:
        if isinstance(other, CDNumber):
            n = max(self.dim, other.dim)
            return _pad(self.coeffs, n), _pad(other.coeffs, n)
        if isinstance(other, (int, float, np.integer, np.floating)):
            c = np.zeros(self.dim)
            c[0] = float(other)
            return self.coeffs, c
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return CDNumber(pair[0] + pair[1])

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return CDNumber(pair[0] - pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return CDNumber(pair[1] - pair[0])

    def __neg__(self) -> CDNumber:
        return CDNumber(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return CDNumber(self.coeffs * float(other))
        if isinstance(other, CDNumber):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return CDNumber(self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return CDNumber(self.coeffs / float(other))
        return NotImplemented

    def __abs__(self) -> float:
        return self.norm()

    def allclose(self, other: CDNumber | Scalar, atol: float = ARITH_TOL) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return False
        return bool(np.max(np.abs(pair[0] - pair[1])) <= atol)

    def __eq__(self, other) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return bool(np.array_equal(pair[0], pair[1]))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c != 0.0:
                terms.append(f"{c:+.6g}" + ("" if j == 0 else f"*i{j}"))
        body = " ".join(terms) if terms else "0"
        return f"CDNumber(v={self.level}: {body})"

    def to_list(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def make(v: int, coeffs: Sequence[float] | np.ndarray) -> CDNumber:
    """Build ``sum coeffs[j] * i_j`` in level ``v``."""
    n = 1 << _check_level(v)
    arr = np.asarray(coeffs, dtype=np.float64)
    if arr.shape != (n,):
        raise SchemaError(f"level {v} needs {n} coefficients, got {arr.size}")
    return CDNumber(arr)


def as_cd(x: CDNumber | Scalar, v: int = 0) -> CDNumber:
    if isinstance(x, CDNumber):
        return x if x.level >= v else x.embed(v)
    return CDNumber.real(v, float(x))


def unify(*xs: CDNumber) -> list[CDNumber]:
    """Embed all arguments into the highest level among them."""
    v = max(x.level for x in xs)
    return [x.embed(v) for x in xs]


def mul(x: CDNumber, y: CDNumber) -> CDNumber:
    n = max(x.dim, y.dim)
    return CDNumber(mul_arrays(_pad(x.coeffs, n), _pad(y.coeffs, n)))


def conj(z: CDNumber) -> CDNumber:
    return z.conj()


def re(z: CDNumber) -> float:
    return z.re


def im(z: CDNumber) -> CDNumber:
    return z.im


def norm_sq(z: CDNumber) -> float:
    return z.norm_sq()


def norm(z: CDNumber) -> float:
    return z.norm()


def inverse(z: CDNumber) -> CDNumber:
    return z.inverse()


def scalar_product(x: CDNumber, y: CDNumber) -> float:
    """``Re(x y*)``, computed through the algebra product."""
    return mul(x, y.conj()).re


def conjugate_via_basis(z: CDNumber) -> CDNumber:
    """Conjugate using only products with the imaginary generators.

    Evaluates ``(2**v - 2)**-1 * (-z + sum_s s (z s*))`` over all imaginary
    generators ``s``. Only defined for ``v >= 2``.
    """
    v = z.level
    if v < 2:
        raise UnsupportedLevelError("conjugation through generators needs level >= 2")
    n = 1 << v
    gens = np.eye(n)[1:]
    gens_conj = -gens
    zs = mul_arrays(np.broadcast_to(z.coeffs, gens.shape), gens_conj)
    total = mul_arrays(gens, zs).sum(axis=0)
    return CDNumber((total - z.coeffs) / (n - 2))


def subalgebra_closure(elements: Iterable[CDNumber], tol: float = 1e-10) -> list[CDNumber]:
    """Orthonormal basis of the smallest unital subalgebra containing ``elements``."""
    elems = list(elements)
    if not elems:
        raise SchemaError("subalgebra_closure needs at least one element")
    elems = unify(*elems)
    n = elems[0].dim
    basis: list[np.ndarray] = []

    def absorb(vec: np.ndarray) -> bool:
        r = vec.astype(np.float64).copy()
        for _ in range(2):
            for b in basis:
                r -= (b @ r) * b
        nr = float(np.linalg.norm(r))
        scale = max(1.0, float(np.linalg.norm(vec)))
        if nr <= tol * scale:
            return False
        basis.append(r / nr)
        return True

    absorb(np.eye(n)[0])
    for e in elems:
        absorb(e.coeffs)
    checked = 0
    while checked < len(basis) and len(basis) < n:
        size = len(basis)
        for i in range(size):
            for j in range(size):
                if max(i, j) < checked:
                    continue
                absorb(mul_arrays(basis[i], basis[j]))
                if len(basis) == n:
                    break
        checked = size
    return [CDNumber(b) for b in basis]


def find_zero_divisor_pair(v: int) -> tuple[CDNumber, CDNumber] | None:
    """Exhaustive search for ``(i_a + s i_b)(i_c + t i_d) = 0``.

    Indices range over ``1 <= a < b`` and ``1 <= c < d`` with signs ``s, t``
    in ``{+1, -1}``. Products are formed in exact integer arithmetic from the
    sign table, so a reported pair multiplies to zero exactly. Returns the
    first hit in lexicographic order of ``(a, b, s, c, d, t)`` or ``None``.
    """
    v = _check_level(v)
    n = 1 << v
    table = sign_table(v).astype(np.int64)
    cands = []
    for a, b in itertools.combinations(range(1, n), 2):
        for s in (1, -1):
            cands.append((a, b, s))
    if not cands:
        return None
    vecs = np.zeros((len(cands), n), dtype=np.int64)
    for r, (a, b, s) in enumerate(cands):
        vecs[r, a] = 1
        vecs[r, b] = s
    m = np.arange(n)
    idx = m[:, None] ^ m[None, :]
    signs = table[idx, m[None, :]]
    for r, (a, b, s) in enumerate(cands):
        left = vecs[r][idx] * signs
        prods = vecs @ left.T
        hits = np.flatnonzero(~prods.any(axis=1))
        if hits.size:
            return CDNumber(vecs[r].astype(float)), CDNumber(vecs[int(hits[0])].astype(float))
    return None


def associator(x: CDNumber, y: CDNumber, z: CDNumber) -> CDNumber:
    return mul(mul(x, y), z) - mul(x, mul(y, z))


# ---------------------------------------------------------------------------
# text form


def to_json(z: CDNumber) -> str:
    return json.dumps(z.to_list())


def from_json(text: str | Sequence[float]) -> CDNumber:
    """Parse a JSON array of ``2**v`` reals; the level is inferred from the length."""
    data = json.loads(text) if isinstance(text, str) else text
    if not isinstance(data, list) or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in data
    ):
        raise SchemaError("a Cayley-Dickson number must be a JSON array of reals")
    level_of_dim(len(data))
    return CDNumber(np.asarray(data, dtype=np.float64))


def random_element(rng: np.random.Generator, v: int, imaginary: bool = False, scale: float = 1.0) -> CDNumber:
    c = rng.standard_normal(1 << v) * scale
    if imaginary:
        c[0] = 0.0
    return CDNumber(c)
