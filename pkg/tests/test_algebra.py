import itertools
import json
import threading

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from cdpoly.algebra import (
    CDNumber,
    associator,
    basis_product,
    conj,
    conjugate_via_basis,
    find_zero_divisor_pair,
    from_json,
    inverse,
    make,
    mul,
    mul_arrays,
    mul_doubling_reference,
    scalar_product,
    sign_table,
    subalgebra_closure,
    to_json,
)
from cdpoly.errors import SchemaError, SingularError, UnsupportedLevelError


def e(v, j):
    return CDNumber.basis(v, j)


def coeff_arrays(v):
    return hnp.arrays(np.float64, 1 << v, elements=st.floats(-10, 10, allow_nan=False))


# hand-written quaternion table: i j = k, j k = i, k i = j
QUAT = {
    (1, 2): (3, 1), (2, 1): (3, -1),
    (2, 3): (1, 1), (3, 2): (1, -1),
    (3, 1): (2, 1), (1, 3): (2, -1),
}


def test_make_and_basis():
    assert make(2, [1, 0, 0, 0]) == CDNumber.real(2, 1.0)
    assert make(2, [0, 1, 0, 0]) == e(2, 1)
    i7 = make(3, [0] * 7 + [1])
    assert i7 * i7 == CDNumber.real(3, -1.0)


def test_make_rejects_wrong_length():
    with pytest.raises(SchemaError):
        make(2, [1, 2, 3])
    with pytest.raises(SchemaError):
        CDNumber(np.zeros(3))


def test_values_are_immutable():
    z = e(2, 1)
    with pytest.raises(ValueError):
        z.coeffs[0] = 3.0


def test_quaternion_table_matches_hand_table():
    for (j, k), (idx, sign) in QUAT.items():
        assert basis_product(2, j, k) == (idx, sign)
    assert e(2, 1) * e(2, 2) == e(2, 3)
    assert e(2, 2) * e(2, 1) == -e(2, 3)


@pytest.mark.parametrize("v", range(0, 7))
def test_table_product_matches_plain_doubling(v):
    rng = np.random.default_rng(v)
    x = rng.standard_normal((20, 1 << v))
    y = rng.standard_normal((20, 1 << v))
    np.testing.assert_allclose(mul_arrays(x, y), mul_doubling_reference(x, y), atol=1e-12)


def test_large_level_uses_doubling_path():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(1 << 10)
    y = rng.standard_normal(1 << 10)
    np.testing.assert_allclose(mul_arrays(x, y), mul_doubling_reference(x, y), atol=1e-9)


@pytest.mark.parametrize("v", range(1, 7))
def test_basis_products_agree_with_doubling_exactly(v):
    n = 1 << v
    eye = np.eye(n)
    prods = mul_doubling_reference(eye[:, None, :], eye[None, :, :])
    table = sign_table(v)
    for j, k in itertools.product(range(n), repeat=2):
        expected = np.zeros(n)
        expected[j ^ k] = table[j, k]
        assert np.array_equal(prods[j, k], expected)


def test_mixed_levels_embed():
    z = e(1, 1) * e(2, 2)
    assert z.level == 2
    assert z == e(2, 3)
    assert (e(1, 1) + e(3, 7)).level == 3


def test_conj():
    assert conj(CDNumber.real(2, 1.0)) == CDNumber.real(2, 1.0)
    assert conj(e(2, 1)) == -e(2, 1)
    z = CDNumber.real(3, 3.0) + e(3, 5) * 2
    assert conj(z) == CDNumber.real(3, 3.0) - e(3, 5) * 2


@given(coeff_arrays(4))
def test_conj_is_involution(c):
    z = CDNumber(c)
    assert conj(conj(z)) == z


def test_re_im_norm():
    z = CDNumber.real(2, 3.0) + e(2, 1) * 4
    assert z.re == 3.0
    assert z.norm() == 5.0
    assert CDNumber.real(2, 7.0).im == CDNumber.zero(2)


@pytest.mark.parametrize("v", range(0, 7))
def test_quadratic_identity(v):
    rng = np.random.default_rng(100 + v)
    for _ in range(20):
        z = CDNumber(rng.standard_normal(1 << v))
        target = CDNumber.real(v, z.norm_sq())
        assert (z * z.conj()).allclose(target, 1e-12 * max(1.0, z.norm_sq()))
        assert (z.conj() * z).allclose(target, 1e-12 * max(1.0, z.norm_sq()))


def test_inverse():
    assert inverse(CDNumber.real(2, 2.0)) == CDNumber.real(2, 0.5)
    assert inverse(e(2, 1)) == -e(2, 1)
    with pytest.raises(SingularError):
        inverse(CDNumber.zero(3))


@given(coeff_arrays(4))
def test_inverse_both_sides(c):
    z = CDNumber(c)
    if z.norm() < 1e-3:
        return
    one = CDNumber.real(4, 1.0)
    assert (z * z.inverse()).allclose(one, 1e-12)
    assert (z.inverse() * z).allclose(one, 1e-12)


def test_scalar_product():
    assert scalar_product(e(2, 1), e(2, 1)) == 1.0
    assert scalar_product(e(2, 1), e(2, 2)) == 0.0


@given(coeff_arrays(3), coeff_arrays(3))
def test_scalar_product_is_dot(a, b):
    assert scalar_product(CDNumber(a), CDNumber(b)) == pytest.approx(float(a @ b), abs=1e-12 * (1 + np.abs(a) @ np.abs(b)))


@given(coeff_arrays(2), coeff_arrays(2), coeff_arrays(2))
def test_quaternions_associative(a, b, c):
    x, y, z = CDNumber(a), CDNumber(b), CDNumber(c)
    scale = 1 + x.norm() * y.norm() * z.norm()
    assert associator(x, y, z).norm() <= 1e-12 * scale


@given(coeff_arrays(3), coeff_arrays(3))
def test_octonions_alternative(a, b):
    x, y = CDNumber(a), CDNumber(b)
    scale = 1 + x.norm() ** 2 * y.norm()
    assert ((x * x) * y - x * (x * y)).norm() <= 1e-12 * scale
    assert ((x * y) * y - x * (y * y)).norm() <= 1e-12 * scale


def test_octonions_not_associative():
    assert any(
        associator(e(3, a), e(3, b), e(3, c)).norm() > 0
        for a, b, c in itertools.product(range(1, 8), repeat=3)
    )


def test_sedenions_not_alternative():
    found = False
    for a, b in itertools.product(range(1, 16), repeat=2):
        x = e(4, a) + e(4, b if b != a else 1)
        for c in range(1, 16):
            y = e(4, c)
            if ((x * x) * y - x * (x * y)).norm() > 0:
                found = True
                break
        if found:
            break
    assert found


def test_conjugate_via_basis_examples():
    assert conjugate_via_basis(e(2, 1)) == -e(2, 1)
    assert conjugate_via_basis(CDNumber.real(2, 1.0)) == CDNumber.real(2, 1.0)
    with pytest.raises(UnsupportedLevelError):
        conjugate_via_basis(e(1, 1))


@pytest.mark.parametrize("v", [2, 3, 4, 5])
def test_conjugate_via_basis_random(v):
    rng = np.random.default_rng(v)
    for _ in range(50):
        z = CDNumber(rng.standard_normal(1 << v))
        assert conjugate_via_basis(z).allclose(z.conj(), 1e-12)


def test_closure_complex_and_quaternion():
    assert len(subalgebra_closure([e(2, 1)])) == 2
    assert len(subalgebra_closure([e(3, 1), e(3, 2)])) == 4


def test_closure_is_orthonormal_and_closed():
    basis = subalgebra_closure([e(3, 1), e(3, 2), e(3, 4)])
    B = np.array([b.coeffs for b in basis])
    np.testing.assert_allclose(B @ B.T, np.eye(len(basis)), atol=1e-12)
    assert len(basis) == 8


def test_closure_random_orthogonal_pair_is_quaternionic(rng):
    for _ in range(10):
        M = CDNumber(np.r_[0.0, rng.standard_normal(7)])
        N = CDNumber(np.r_[0.0, rng.standard_normal(7)])
        N = N - M * (float(N.coeffs @ M.coeffs) / M.norm_sq())
        span = np.array([np.eye(8)[0], M.coeffs, N.coeffs, (M * N).coeffs])
        assert np.linalg.matrix_rank(span, tol=1e-9) == 4
        assert len(subalgebra_closure([M, N])) == 4


def test_closure_sedenion_pair_grows_past_quaternions(rng):
    # sedenions are not alternative: M(MN) leaves span{1, M, N, MN}
    M = CDNumber(np.r_[0.0, rng.standard_normal(15)])
    N = CDNumber(np.r_[0.0, rng.standard_normal(15)])
    assert (M * (M * N) - (M * M) * N).norm() > 1e-6
    assert len(subalgebra_closure([M, N])) > 4


def test_zero_divisors():
    assert find_zero_divisor_pair(2) is None
    assert find_zero_divisor_pair(3) is None
    pair = find_zero_divisor_pair(4)
    assert pair is not None
    x, y = pair
    assert x.norm() > 0 and y.norm() > 0
    assert mul(x, y) == CDNumber.zero(4)
    assert np.array_equal(mul_doubling_reference(x.coeffs, y.coeffs), np.zeros(16))


def test_associativity_counterexample_among_sedenion_basis():
    hit = next(
        (a, b, c)
        for a, b, c in itertools.product(range(1, 16), repeat=3)
        if associator(e(4, a), e(4, b), e(4, c)).norm() > 0
    )
    assert hit is not None


def test_json_roundtrip():
    z = CDNumber(np.array([0.1, -2.5, 1e-300, 3.0]))
    assert from_json(to_json(z)) == z
    with pytest.raises(SchemaError, match="power of two"):
        from_json("[1, 2, 3]")
    with pytest.raises(SchemaError):
        from_json(json.dumps({"a": 1}))


def test_concurrent_table_access():
    results = []

    def work():
        results.append(sign_table(7).sum())

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1
