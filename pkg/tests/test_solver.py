import warnings

import numpy as np
import pytest

from cdpoly.algebra import CDNumber
from cdpoly.errors import PreconditionError
from cdpoly.numerics import jacobian_fd, kernel_basis, kernel_dimension
from cdpoly.polynomial import Polynomial, Term, evaluate, evaluate_arrays, from_dense, random_monic_polynomial
from cdpoly.solver import (
    SolveConfig,
    TraceTruncated,
    deterministic_seeds,
    find_zero,
    find_zeros,
    is_monic_dominant,
    local_zero_set_dimension,
    polynomial_jacobian,
    start_point,
    trace_component,
)


def e(v, j):
    return CDNumber.basis(v, j)


def real(v, x):
    return CDNumber.real(v, x)


def on_unit_imaginary_sphere(z, tol=1e-6):
    return abs(z.re) <= tol and abs(z.norm() - 1.0) <= tol


def test_config_validation():
    with pytest.raises(PreconditionError):
        SolveConfig(starts=0)
    with pytest.raises(PreconditionError):
        SolveConfig(search_radius=-1.0)
    P = from_dense(2, [2.0, e(2, 1)])
    assert SolveConfig().radius_for(P) == 4.0
    assert SolveConfig(search_radius=0.5).radius_for(P) == 0.5


def test_start_points_are_deterministic():
    P = from_dense(3, [1.0, 0.0, 1.0])
    cfg = SolveConfig(seed=9)
    seeds = deterministic_seeds(3)
    assert len(seeds) == 17
    np.testing.assert_array_equal(start_point(P, cfg, 0), np.zeros(8))
    np.testing.assert_array_equal(start_point(P, cfg, 2), -np.eye(8)[0])
    a, b = start_point(P, cfg, 40), start_point(P, cfg, 40)
    np.testing.assert_array_equal(a, b)
    assert np.linalg.norm(a) <= cfg.radius_for(P)
    assert not np.array_equal(a, start_point(P, SolveConfig(seed=10), 40))


def test_find_zero_sphere():
    rep = find_zero(from_dense(2, [1.0, 0.0, 1.0]))
    assert rep.success and rep.residual <= 1e-9
    assert on_unit_imaginary_sphere(rep.zero)
    assert rep.kernel_dim == 2


def test_find_zero_linear():
    P = Polynomial(2, (Term((real(2, 1.0),), (1,)), Term((-e(2, 3),), (0,))))
    rep = find_zero(P)
    assert rep.zero.allclose(e(2, 3), 1e-9)
    assert rep.kernel_dim == 0


def test_find_zero_double_root():
    rep = find_zero(from_dense(2, [1.0, -2.0, 1.0]))
    assert rep.success
    assert rep.zero.allclose(real(2, 1.0), 1e-4)


def test_soundness_by_reevaluation():
    rng = np.random.default_rng(1)
    for _ in range(10):
        P = random_monic_polynomial(rng, 3)
        rep = find_zero(P, SolveConfig(starts=32))
        if rep.success:
            assert evaluate(P, rep.zero).norm() == pytest.approx(rep.residual, abs=1e-15)
            assert rep.residual <= 1e-9


def test_failure_is_reported_not_raised():
    P = random_monic_polynomial(np.random.default_rng(2), 3)
    rep = find_zero(P, SolveConfig(starts=1, max_iters=1, deterministic_starts=False, tol_residual=1e-300))
    assert not rep.success and rep.zero is None and rep.point is not None
    d = rep.to_dict()
    assert d["success"] is False and d["best_point"] is not None


def test_degree_zero_rejected():
    with pytest.raises(PreconditionError):
        find_zero(from_dense(2, [3.0]))
    with pytest.raises(PreconditionError):
        find_zeros(from_dense(2, [3.0]))


def test_determinism():
    P = random_monic_polynomial(np.random.default_rng(3), 3)
    cfg = SolveConfig(seed=5, deterministic_starts=False)
    assert find_zero(P, cfg).to_dict() == find_zero(P, cfg).to_dict()


def test_parallel_matches_serial():
    P = random_monic_polynomial(np.random.default_rng(8), 3)
    serial = find_zero(P, SolveConfig(seed=2, deterministic_starts=False, starts=16))
    parallel = find_zero(P, SolveConfig(seed=2, deterministic_starts=False, starts=16, workers=4))
    assert serial.to_dict() == parallel.to_dict()


def test_find_zeros_samples_sphere():
    reps = find_zeros(from_dense(2, [1.0, 0.0, 1.0]), SolveConfig(), count=20)
    pts = np.array([r.zero.coeffs for r in reps])
    assert all(on_unit_imaginary_sphere(r.zero) for r in reps)
    distinct = {tuple(np.round(p, 6)) for p in pts}
    assert len(distinct) >= 5


def test_find_zeros_deduplicates_isolated():
    reps = find_zeros(from_dense(2, [-1.0, 0.0, 1.0]), SolveConfig(), count=12)
    values = sorted(round(r.zero.re, 8) for r in reps)
    assert values == [-1.0, 1.0]
    assert all(r.kernel_dim == 0 and abs(r.zero.im.norm()) <= 1e-9 for r in reps)


@pytest.mark.parametrize("v, expected", [(2, 2), (3, 6)])
def test_local_dimension_sphere(v, expected):
    assert local_zero_set_dimension(from_dense(v, [1.0, 0.0, 1.0]), e(v, 1)) == expected


def test_local_dimension_isolated_and_errors():
    P = Polynomial(2, (Term((real(2, 1.0),), (1,)), Term((-e(2, 1),), (0,))))
    assert local_zero_set_dimension(P, e(2, 1)) == 0
    assert local_zero_set_dimension(from_dense(2, [-1.0, 0.0, 1.0]), real(2, -1.0)) == 0
    with pytest.raises(PreconditionError):
        local_zero_set_dimension(P, e(2, 2))


def test_jacobian_matches_directional_derivatives(rng):
    for v in (2, 3):
        P = random_monic_polynomial(rng, v)
        z = rng.standard_normal(1 << v)
        J = polynomial_jacobian(P, z)
        for _ in range(5):
            d = rng.standard_normal(1 << v)
            d /= np.linalg.norm(d)
            h = 1e-5
            oracle = (evaluate_arrays(P, z + h * d) - evaluate_arrays(P, z - h * d)) / (2 * h)
            assert np.linalg.norm(J @ d - oracle) <= 1e-5 * max(1.0, np.linalg.norm(oracle))


def test_jacobian_of_linear_map_is_exact():
    A = np.arange(12.0).reshape(3, 4)
    J = jacobian_fd(lambda pts: pts @ A.T, np.ones(4))
    np.testing.assert_allclose(J, A, atol=1e-8)


def test_kernel_helpers():
    J = np.diag([3.0, 1.0, 1e-9, 0.0])
    k, sv = kernel_dimension(J)
    assert k == 2 and sv[0] == 3.0
    B = kernel_basis(J)
    assert B.shape == (2, 4)
    np.testing.assert_allclose(np.abs(B[:, 2:]).sum(axis=0), [1.0, 1.0])
    assert kernel_dimension(np.zeros((2, 2)))[0] == 2


@pytest.mark.parametrize("v", [2, 3])
def test_trace_stays_on_sphere(v):
    chain = trace_component(from_dense(v, [1.0, 0.0, 1.0]), e(v, 1), steps=100, step_size=0.05, seed=v)
    assert len(chain) == 101
    assert chain[0] == e(v, 1)
    assert all(on_unit_imaginary_sphere(z) for z in chain)
    assert (chain[-1] - chain[0]).norm() > 0.1


def test_trace_rejects_isolated_zero():
    with pytest.raises(PreconditionError):
        trace_component(from_dense(2, [-1.0, 0.0, 1.0]), real(2, 1.0), 5, 0.1)


def test_trace_truncates_with_warning():
    # 0.3 is inexact in binary, so the corrector cannot reach a zero residual
    P = from_dense(3, [0.3, 0.0, 0.3])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        chain = trace_component(P, e(3, 1), steps=5, step_size=0.05, tol=1e-300)
    assert len(chain) == 1
    assert any(issubclass(w.category, TraceTruncated) for w in caught)


def test_monic_dominant_recognition():
    P = Polynomial(2, (Term((e(2, 1),), (1,)), Term((real(2, 2.0),), (0,))), monic_leading=3)
    assert is_monic_dominant(P)
    assert is_monic_dominant(from_dense(2, [2.0, e(2, 1), 0.0, 1.0]))
    assert not is_monic_dominant(from_dense(2, [1.0, 0.0, 0.0, 2.0]))
    Q = Polynomial(2, (Term((e(2, 1), e(2, 2)), (1, 1)),), monic_leading=2)
    assert not is_monic_dominant(Q)
    assert not is_monic_dominant(Polynomial(2, ()))
