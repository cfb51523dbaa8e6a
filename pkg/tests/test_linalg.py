import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from vecmkit.errors import (
    AsymmetricMatrixError,
    DegreesOfFreedomError,
    NotPDError,
    SingularDesignError,
)
from vecmkit.linalg import (
    chi_square_ppf,
    chi_square_sf,
    generalized_eigen,
    logdet_spd,
    normal_cdf,
    ols_fit,
    residualize,
)


class TestOls:
    def test_hand_solved(self):
        # X'X = [[2,1],[1,2]], X'y = (2.5, 0.5) -> b = (1.5, -0.5)
        X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        y = np.array([2.0, 0.0, 0.5])
        fit = ols_fit(X, y)
        np.testing.assert_allclose(fit.coefficients, [1.5, -0.5], atol=1e-14)
        np.testing.assert_allclose(fit.residuals, [0.5, 0.5, -0.5], atol=1e-14)
        assert fit.sigma2 == pytest.approx(0.75)
        # var(b) = sigma2 * inv(X'X) = 0.75 * [[2,-1],[-1,2]]/3
        np.testing.assert_allclose(fit.cov, 0.25 * np.array([[2, -1], [-1, 2]]), atol=1e-14)

    def test_exact_fit_recovers_coefficients(self, rng):
        X = np.column_stack([np.ones(50), rng.standard_normal((50, 3))])
        b = np.array([0.3, -1.2, 2.0, 0.7])
        fit = ols_fit(X, X @ b + 1e-9 * rng.standard_normal(50))
        np.testing.assert_allclose(fit.coefficients, b, atol=1e-8)

    def test_generative_recovery(self, rng):
        X = np.column_stack([np.ones(5000), rng.standard_normal((5000, 2))])
        b = np.array([1.0, -0.5, 0.25])
        fit = ols_fit(X, X @ b + rng.standard_normal(5000))
        assert np.all(np.abs(fit.coefficients - b) < 4 * fit.stderr)

    def test_loglik(self, rng):
        X = np.column_stack([np.ones(30), rng.standard_normal(30)])
        y = rng.standard_normal(30)
        fit = ols_fit(X, y)
        s2 = fit.rss / 30
        expected = np.sum(-0.5 * np.log(2 * np.pi * s2) - fit.residuals**2 / (2 * s2))
        assert fit.loglik == pytest.approx(expected, rel=1e-12)

    def test_singular(self):
        X = np.column_stack([np.ones(10), np.arange(10.0), 2 * np.arange(10.0)])
        with pytest.raises(SingularDesignError):
            ols_fit(X, np.arange(10.0))

    def test_zero_column(self):
        with pytest.raises(SingularDesignError):
            ols_fit(np.column_stack([np.ones(5), np.zeros(5)]), np.arange(5.0))

    def test_not_enough_rows(self):
        with pytest.raises(DegreesOfFreedomError):
            ols_fit(np.ones((2, 2)) + np.eye(2), [1.0, 2.0])

    @settings(max_examples=60)
    @given(st.integers(5, 40), st.integers(1, 4), st.integers(0, 2**31))
    def test_projection_properties(self, n, p, seed):
        assume(n > p + 1)
        r = np.random.default_rng(seed)
        X = r.standard_normal((n, p))
        y = r.standard_normal(n)
        fit = ols_fit(X, y)
        # residuals orthogonal to the design
        np.testing.assert_allclose(X.T @ fit.residuals, 0.0, atol=1e-9 * max(1.0, np.abs(y).sum()))
        # projecting the fitted values returns them unchanged
        np.testing.assert_allclose(ols_fit(X, fit.fitted).fitted, fit.fitted, atol=1e-9)

    def test_residualize_matches_ols(self, rng):
        X = np.column_stack([np.ones(40), rng.standard_normal(40)])
        Y = rng.standard_normal((40, 3))
        R = residualize(Y, X)
        for j in range(3):
            np.testing.assert_allclose(R[:, j], ols_fit(X, Y[:, j]).residuals, atol=1e-12)
        np.testing.assert_array_equal(residualize(Y, np.empty((40, 0))), Y)


def _spd(r, k):
    M = r.standard_normal((k, k + 3))
    return M @ M.T + 0.1 * np.eye(k)


class TestGeneralizedEigen:
    def test_two_by_two_quadratic_oracle(self):
        A = np.array([[4.0, 1.0], [1.0, 3.0]])
        B = np.array([[2.0, 0.5], [0.5, 1.0]])
        # det(A - mu B) = 0 expanded as a quadratic in mu
        a = B[0, 0] * B[1, 1] - B[0, 1] ** 2
        b = -(A[0, 0] * B[1, 1] + A[1, 1] * B[0, 0] - 2 * A[0, 1] * B[0, 1])
        c = A[0, 0] * A[1, 1] - A[0, 1] ** 2
        disc = math.sqrt(b * b - 4 * a * c)
        roots = sorted([(-b + disc) / (2 * a), (-b - disc) / (2 * a)], reverse=True)
        vals, _ = generalized_eigen(A, B)
        np.testing.assert_allclose(vals, roots, rtol=1e-12)

    @settings(max_examples=40)
    @given(st.integers(1, 5), st.integers(0, 2**31))
    def test_definition_and_normalization(self, k, seed):
        r = np.random.default_rng(seed)
        A = r.standard_normal((k, k))
        A = A + A.T
        B = _spd(r, k)
        vals, V = generalized_eigen(A, B)
        assert np.all(np.diff(vals) <= 1e-12)
        np.testing.assert_allclose(A @ V, B @ V * vals, atol=1e-8 * (1 + np.abs(A).max()))
        np.testing.assert_allclose(V.T @ B @ V, np.eye(k), atol=1e-8)

    @settings(max_examples=40)
    @given(st.integers(1, 4), st.integers(0, 2**31))
    def test_congruence_invariance(self, k, seed):
        r = np.random.default_rng(seed)
        A = r.standard_normal((k, k))
        A = A @ A.T
        B = _spd(r, k)
        P = r.standard_normal((k, k)) + 3 * np.eye(k)
        assume(abs(np.linalg.det(P)) > 0.1)
        v1, _ = generalized_eigen(A, B)
        v2, _ = generalized_eigen(P.T @ A @ P, P.T @ B @ P)
        np.testing.assert_allclose(v1, v2, rtol=1e-6, atol=1e-8)

    def test_asymmetric(self):
        with pytest.raises(AsymmetricMatrixError):
            generalized_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2))

    def test_not_pd(self):
        with pytest.raises(NotPDError):
            generalized_eigen(np.eye(2), np.array([[1.0, 2.0], [2.0, 1.0]]))


def _chi2_sf_quadrature(x, df):
    k = mpmath.mpf(df) / 2
    density = lambda t: t ** (k - 1) * mpmath.exp(-t / 2) / (2**k * mpmath.gamma(k))
    return float(mpmath.quad(density, [x, x + 50, mpmath.inf]))


class TestChiSquare:
    @pytest.mark.parametrize("x,df", [(0.5, 1), (1.622778, 1), (3.841466, 1), (5.99, 2), (12.0, 4), (30.0, 9)])
    def test_against_quadrature(self, x, df):
        assert chi_square_sf(x, df) == pytest.approx(_chi2_sf_quadrature(x, df), rel=1e-9)

    @given(st.floats(1e-6, 200.0))
    def test_one_df_normal_identity(self, x):
        expected = 2.0 * (1.0 - normal_cdf(math.sqrt(x)))
        assert chi_square_sf(x, 1) == pytest.approx(expected, rel=1e-8, abs=1e-15)

    @given(st.floats(0.0, 100.0), st.floats(0.0, 100.0), st.integers(1, 20))
    def test_monotone(self, a, b, df):
        lo, hi = sorted((a, b))
        assert chi_square_sf(lo, df) >= chi_square_sf(hi, df)

    @given(st.floats(1e-4, 0.9999), st.integers(1, 20))
    def test_ppf_inverts_sf(self, q, df):
        assert chi_square_sf(chi_square_ppf(q, df), df) == pytest.approx(q, rel=1e-8)

    def test_edges(self):
        assert chi_square_sf(0.0, 3) == 1.0
        with pytest.raises(ValueError):
            chi_square_sf(-1.0, 1)
        with pytest.raises(ValueError):
            chi_square_sf(1.0, 0)


def test_logdet(rng):
    M = _spd(rng, 3)
    assert logdet_spd(M) == pytest.approx(math.log(np.linalg.det(M)))
    with pytest.raises(NotPDError):
        logdet_spd(-np.eye(3))
