import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from cdpoly.algebra import CDNumber, mul_arrays
from cdpoly.errors import AmbiguousDirectionError, SingularError
from cdpoly.transcendental import exp, int_pow, log, polar, sinc, sinc_array


def e(v, j):
    return CDNumber.basis(v, j)


def one(v):
    return CDNumber.real(v, 1.0)


def all_bracketings(z: np.ndarray, k: int) -> list[np.ndarray]:
    """Every bracketing of the k-fold product z z ... z, by dynamic programming on length."""
    table: dict[int, list[np.ndarray]] = {1: [z]}
    for n in range(2, k + 1):
        table[n] = [mul_arrays(a, b) for split in range(1, n) for a in table[split] for b in table[n - split]]
    return table[k]


def test_sinc_series_matches_direct():
    for t in [0.0, 1e-9, 5e-5, 9.9e-5, 1e-4, 1.1e-4, 0.3, 2.0]:
        direct = 1.0 if t == 0.0 else math.sin(t) / t
        assert sinc(t) == pytest.approx(direct, rel=1e-15, abs=1e-16)
    t = np.array([0.0, 5e-5, 0.5])
    np.testing.assert_allclose(sinc_array(t), [sinc(x) for x in t], rtol=1e-15)


def test_exp_examples():
    assert exp(CDNumber.zero(2)) == one(2)
    assert exp(e(2, 1) * math.pi).allclose(-one(2), 1e-15)
    assert exp(e(2, 2) * (math.pi / 2)).allclose(e(2, 2), 1e-15)


def test_exp_real_part_scales():
    z = CDNumber.real(3, 2.0) + e(3, 5) * 0.7
    expected = (one(3) * math.cos(0.7) + e(3, 5) * math.sin(0.7)) * math.exp(2.0)
    assert exp(z).allclose(expected, 1e-12)


def test_polar_examples():
    p = polar(CDNumber.real(2, 2.0))
    assert p.rho == 2.0 and p.M == CDNumber.zero(2)
    p = polar(one(2) + e(2, 1))
    assert p.rho == pytest.approx(math.sqrt(2))
    assert p.M.allclose(e(2, 1) * (math.pi / 4), 1e-15)
    p = polar(CDNumber.real(2, -3.0), hint=e(2, 1))
    assert p.rho == 3.0
    assert p.M.allclose(e(2, 1) * math.pi, 1e-15)


def test_polar_errors():
    with pytest.raises(SingularError):
        polar(CDNumber.zero(2))
    with pytest.raises(AmbiguousDirectionError):
        polar(CDNumber.real(3, -1.0))


def test_log_examples():
    assert log(one(2)) == CDNumber.zero(2)
    w = CDNumber.real(2, 1.0) + e(2, 1) * (math.pi / 2)
    assert log(exp(w)).allclose(w, 1e-14)
    with pytest.raises(AmbiguousDirectionError):
        log(-one(2))


@pytest.mark.parametrize("v", [2, 3, 4])
def test_exp_log_roundtrip(v):
    rng = np.random.default_rng([7, v])
    checked = 0
    while checked < 1000:
        z = CDNumber(rng.standard_normal(1 << v) * rng.uniform(0.1, 5.0))
        p = polar(z)
        if z.im.norm() <= 1e-6 or p.theta >= math.pi - 1e-6:
            continue
        assert exp(log(z)).allclose(z, 1e-9)
        assert abs(p.reconstruct().coeffs - z.coeffs).max() <= 1e-9
        assert 0.0 <= p.theta <= math.pi and p.M.re == 0.0
        checked += 1


imag_coeffs = hnp.arrays(np.float64, 15, elements=st.floats(-6, 6, allow_nan=False))


@given(imag_coeffs)
def test_exp_of_imaginary_is_unit(c):
    M = CDNumber(np.r_[0.0, c])
    assert abs(exp(M).norm() - 1.0) <= 1e-12


@given(imag_coeffs)
def test_exp_of_opposite_exponents_cancel(c):
    M = CDNumber(np.r_[0.0, c])
    assert (exp(M) * exp(-M)).allclose(one(4), 1e-10)


def test_int_pow_examples():
    assert int_pow(e(2, 1), 2) == -one(2)
    z = CDNumber(np.random.default_rng(3).standard_normal(16))
    assert int_pow(z, 0) == one(4)
    zz = z * z
    assert (((zz * z) * zz) - int_pow(z, 5)).norm() <= 1e-10 * (1 + z.norm() ** 5)


def test_int_pow_negative():
    z = one(3) + e(3, 6) * 2
    assert (int_pow(z, -2) * int_pow(z, 2)).allclose(one(3), 1e-12)


@pytest.mark.parametrize("v", range(0, 6))
def test_power_associativity_all_bracketings(v):
    rng = np.random.default_rng([11, v])
    for _ in range(3):
        z = rng.standard_normal(1 << v)
        z /= np.linalg.norm(z)
        for k in range(1, 9):
            ref = int_pow(CDNumber(z), k).coeffs
            vals = np.array(all_bracketings(z, k))
            assert np.abs(vals - ref).max() <= 1e-10
