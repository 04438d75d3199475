"""Spectral factorization, fast transforms, Poisson pseudo-solve, projector."""

import numpy as np
import pytest

from tvstokes import (
    DimensionError,
    ParameterError,
    PoissonPlan,
    adjoint_grad,
    dct_axis,
    diff_factors,
    diff_matrix,
    dual_step_bound,
    grad,
    grad_operator_norm,
    inner,
    mode_apply,
    poisson_solve,
    project_gradient_field,
    singular_values,
)

from oracles import (
    dense_diff,
    dense_grad_matrix,
    dense_laplacian_pinv,
    dense_projector,
    rand_scalar,
    rand_vector,
)


# ------------------------------------------------------------- diff matrix

def test_diff_matrix_literals():
    np.testing.assert_array_equal(diff_matrix(2), [[-1.0, 1.0], [0.0, 0.0]])
    np.testing.assert_array_equal(
        diff_matrix(3), [[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]]
    )


def test_diff_matrix_rank():
    for n in (2, 3, 5, 9):
        assert np.linalg.matrix_rank(diff_matrix(n)) == n - 1


def test_diff_matrix_rejects_small_n():
    with pytest.raises(DimensionError):
        diff_matrix(1)


# ------------------------------------------------------------- SVD factors

def test_factors_n2_literal():
    f = diff_factors(2)
    np.testing.assert_allclose(f.sigma, [0.0, np.sqrt(2.0)], atol=1e-15)
    r = 1.0 / np.sqrt(2.0)
    np.testing.assert_allclose(f.cosine, [[r, r], [r, -r]], atol=1e-15)
    np.testing.assert_allclose(f.sine, [[1.0]], atol=1e-15)


def test_factors_n4_sigma():
    f = diff_factors(4)
    want = [0.0, 2.0 * np.sin(np.pi / 8), np.sqrt(2.0), 2.0 * np.sin(3 * np.pi / 8)]
    np.testing.assert_allclose(f.sigma, want, atol=1e-15)
    np.testing.assert_allclose(f.sigma, [0.0, 0.76537, 1.41421, 1.84776], atol=1e-5)


def test_sigma_formula_exact():
    for n in range(2, 65):
        expected = 2.0 * np.sin(np.pi * np.arange(n) / (2.0 * n))
        np.testing.assert_array_equal(singular_values(n), expected)


def test_sigma_monotone_and_bounded():
    for n in (2, 5, 16, 64):
        s = singular_values(n)
        assert s[0] == 0.0
        assert np.all(np.diff(s) > 0.0)
        assert s[-1] < 2.0


def test_factor_orthogonality():
    for n in range(2, 33):
        f = diff_factors(n)
        np.testing.assert_allclose(f.cosine @ f.cosine.T, np.eye(n), atol=1e-12)
        np.testing.assert_allclose(f.sine @ f.sine.T, np.eye(n - 1), atol=1e-12)


def test_assembled_factorization_reproduces_diff():
    for n in range(2, 17):
        err = np.max(np.abs(diff_factors(n).assemble() - dense_diff(n)))
        assert err <= 1e-12, (n, err)


# ------------------------------------------------------------- fast DCT

def test_dct_constant_vector():
    out = dct_axis(np.ones(4), axis=0)
    np.testing.assert_allclose(out, [2.0, 0.0, 0.0, 0.0], atol=1e-14)


def test_dct_round_trip_and_parseval():
    u = rand_scalar((5, 8), 0)
    fwd = dct_axis(u, axis=1)
    np.testing.assert_allclose(dct_axis(fwd, axis=1, direction="inverse"), u, atol=1e-12)
    assert np.linalg.norm(fwd) == pytest.approx(np.linalg.norm(u), abs=1e-12)


def test_dct_matches_dense_factor():
    for n in (2, 3, 5, 16, 32):
        u = rand_scalar((4, n), n)
        C = diff_factors(n).cosine
        np.testing.assert_allclose(dct_axis(u, axis=1), mode_apply(u, C, 1), atol=1e-12)
        np.testing.assert_allclose(
            dct_axis(u, axis=1, direction="inverse"), mode_apply(u, C.T, 1), atol=1e-12
        )


def test_dct_bad_direction():
    with pytest.raises(ParameterError):
        dct_axis(np.ones(4), axis=0, direction="sideways")


# ------------------------------------------------------------- Poisson solve

def test_poisson_zero():
    assert np.all(poisson_solve(np.zeros((4, 4))) == 0.0)


def test_poisson_1d_example():
    D = dense_diff(3)
    f = D.T @ D @ np.array([1.0, 2.0, 4.0])
    np.testing.assert_allclose(f, [-1.0, -1.0, 2.0], atol=1e-15)
    sol = poisson_solve(f)
    np.testing.assert_allclose(sol, [-4.0 / 3.0, -1.0 / 3.0, 5.0 / 3.0], atol=1e-12)
    np.testing.assert_allclose(sol, dense_laplacian_pinv((3,)) @ f, atol=1e-12)


def test_poisson_matches_dense_pseudoinverse():
    for dims, seed in [((3, 4), 1), ((4, 4, 4), 2)]:
        f = rand_scalar(dims, seed)
        f_range = adjoint_grad(rand_vector(dims, seed + 10))  # in-range input
        pinv = dense_laplacian_pinv(dims)
        for rhs in (f_range,):
            got = poisson_solve(rhs)
            np.testing.assert_allclose(got.ravel(), pinv @ rhs.ravel(), atol=1e-10)
        # arbitrary input: constant-mode coefficient is discarded
        got = poisson_solve(f)
        assert abs(np.sum(got)) <= 1e-9 * np.linalg.norm(f)


def test_poisson_range_identity():
    dims = (4, 5, 3)
    f = adjoint_grad(rand_vector(dims, 3))
    sol = poisson_solve(f)
    back = adjoint_grad(grad(sol))
    np.testing.assert_allclose(back, f, atol=1e-10)


def test_poisson_plan_denominator_positive_off_origin():
    plan = PoissonPlan((3, 4, 5))
    denom = plan.denominator.copy()
    assert denom[0, 0, 0] == 0.0
    denom[0, 0, 0] = 1.0
    assert np.all(denom > 0.0)


def test_poisson_plan_shape_mismatch():
    with pytest.raises(DimensionError):
        PoissonPlan((4, 4)).solve(np.zeros((4, 5)))


# ------------------------------------------------------------- projector

def test_projector_fixes_gradient_fields():
    u = rand_scalar((4, 5, 3), 4)
    g = grad(u)
    np.testing.assert_allclose(project_gradient_field(g), g, atol=1e-10)


def test_projector_1d_example():
    v = np.array([[5.0, -2.0, 7.0]])
    np.testing.assert_allclose(project_gradient_field(v), [[5.0, -2.0, 0.0]], atol=1e-12)


def test_projector_idempotent():
    v = rand_vector((4, 4, 4), 5)
    once = project_gradient_field(v)
    np.testing.assert_allclose(project_gradient_field(once), once, atol=1e-10)


def test_projector_matches_dense_oracle():
    for dims, seed in [((3, 4), 6), ((4, 4, 4), 7)]:
        Pi = dense_projector(dims)
        v = rand_vector(dims, seed)
        got = project_gradient_field(v).ravel()
        want = Pi @ v.ravel()
        assert np.max(np.abs(got - want)) <= 1e-9


def test_projector_self_adjoint():
    dims = (4, 5)
    v = rand_vector(dims, 8)
    w = rand_vector(dims, 9)
    lhs = inner(project_gradient_field(v), w)
    rhs = inner(v, project_gradient_field(w))
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


# ------------------------------------------------------------- operator norm

def test_grad_operator_norm_1d():
    got = grad_operator_norm((64,))
    assert got == pytest.approx(2.0 * np.sin(63 * np.pi / 128), abs=1e-15)
    assert got == pytest.approx(1.99940, abs=1e-5)


def test_grad_operator_norm_asymptote():
    big = grad_operator_norm((10**6, 10**6, 10**6))
    assert big == pytest.approx(2.0 * np.sqrt(3.0), abs=1e-6)
    assert big == pytest.approx(3.4641, abs=1e-4)


def test_grad_operator_norm_dominates_dense_spectrum():
    dims = (4, 4)
    G = dense_grad_matrix(dims)
    top = float(np.linalg.eigvalsh(G @ G.T).max())
    assert grad_operator_norm(dims) ** 2 >= top - 1e-10
    # the closed form is in fact the exact spectral norm
    assert grad_operator_norm(dims) ** 2 == pytest.approx(top, abs=1e-10)


def test_step_bound_consistency():
    for dims in [(4,), (64,), (3, 4), (16, 16), (4, 4, 4), (2, 3, 4, 5)]:
        d = len(dims)
        assert 2.0 / grad_operator_norm(dims) ** 2 >= dual_step_bound(d) - 1e-12
