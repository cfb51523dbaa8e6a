"""Numerical kernels: OLS, the symmetric-definite eigenproblem and the
distribution functions used by the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla
from scipy import special

from .errors import (
    AsymmetricMatrixError,
    DegreesOfFreedomError,
    NotPDError,
    SingularDesignError,
)

SYMMETRY_TOL = 1e-9
_RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class RegressionFit:
    coefficients: np.ndarray
    stderr: np.ndarray
    residuals: np.ndarray
    t_stats: np.ndarray
    sigma2: float
    loglik: float
    nobs: int
    nparams: int
    cov: np.ndarray
    design: np.ndarray
    endog: np.ndarray

    @property
    def fitted(self) -> np.ndarray:
        return self.endog - self.residuals

    @property
    def rss(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def df_resid(self) -> int:
        return self.nobs - self.nparams

    @property
    def rsquared(self) -> float:
        """Centered R² (uncentered when the regressand has no variance about 0 mean)."""
        dev = self.endog - self.endog.mean()
        tss = float(dev @ dev)
        if tss == 0.0:
            return float("nan")
        return 1.0 - self.rss / tss


def _check_matrix(X, name="X") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-d")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} has non-finite entries")
    return X


def ols_fit(X, y) -> RegressionFit:
    """Least squares through a column-scaled QR factorization.

    ``stderr`` uses ``sigma2 = RSS/(n-p)``; ``loglik`` is the concentrated
    Gaussian log-likelihood with the ML variance ``RSS/n``.
    """
    X = _check_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n, p = X.shape
    if y.size != n:
        raise ValueError(f"X has {n} rows but y has {y.size} entries")
    if n <= p:
        raise DegreesOfFreedomError(f"{n} observations for {p} parameters")

    if p == 0:
        resid = y.copy()
        coef = np.empty(0)
        xtx_inv = np.empty((0, 0))
    else:
        scale = np.linalg.norm(X, axis=0)
        if np.any(scale == 0):
            raise SingularDesignError("design has an all-zero column")
        Q, R = np.linalg.qr(X / scale)
        d = np.abs(np.diag(R))
        if d.min() <= _RANK_TOL * max(d.max(), 1.0):
            raise SingularDesignError("design matrix is rank deficient")
        coef_scaled = sla.solve_triangular(R, Q.T @ y)
        coef = coef_scaled / scale
        resid = y - X @ coef
        R_inv = sla.solve_triangular(R, np.eye(p))
        xtx_inv = (R_inv @ R_inv.T) / np.outer(scale, scale)

    rss = float(resid @ resid)
    sigma2 = rss / (n - p)
    cov = sigma2 * xtx_inv
    stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        tstats = np.where(stderr > 0, coef / np.where(stderr > 0, stderr, 1.0), np.nan)
    if rss > 0:
        loglik = -0.5 * n * (1.0 + math.log(2.0 * math.pi) + math.log(rss / n))
    else:
        loglik = math.inf
    return RegressionFit(
        coefficients=coef,
        stderr=stderr,
        residuals=resid,
        t_stats=tstats,
        sigma2=sigma2,
        loglik=loglik,
        nobs=n,
        nparams=p,
        cov=cov,
        design=X,
        endog=y,
    )


def residualize(Y, X) -> np.ndarray:
    """Residuals of every column of Y after projecting on X (X may be empty)."""
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.size == 0 or X.shape[1] == 0:
        return Y.copy()
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    return Y - X @ coef


def _symmetric(M, name: str) -> np.ndarray:
    M = _check_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square")
    asym = np.max(np.abs(M - M.T)) if M.size else 0.0
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
        raise AsymmetricMatrixError(f"{name} is not symmetric (max asymmetry {asym:.3g})")
    return 0.5 * (M + M.T)


def generalized_eigen(A, B) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``A v = mu B v`` for symmetric A and positive definite B.

    Eigenvalues are returned in descending order; eigenvector columns are
    B-orthonormal.
    """
    A = _symmetric(A, "A")
    B = _symmetric(B, "B")
    if A.shape != B.shape:
        raise ValueError("A and B must have the same shape")
    try:
        L = np.linalg.cholesky(B)
    except np.linalg.LinAlgError:
        raise NotPDError("B is not positive definite") from None
    if np.min(np.abs(np.diag(L))) <= 1e-14 * max(1.0, np.max(np.abs(np.diag(L)))):
        raise NotPDError("B is numerically singular")
    vals, vecs = sla.eigh(A, B)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def chi_square_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution, Q(df/2, x/2)."""
    if df <= 0:
        raise ValueError("df must be positive")
    if x < 0 or math.isnan(x):
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    return float(special.gammaincc(0.5 * df, 0.5 * x))


def chi_square_ppf(q: float, df: int) -> float:
    """Point with upper-tail probability ``q``."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    return float(2.0 * special.gammainccinv(0.5 * df, q))


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def logdet_spd(M) -> float:
    sign, ld = np.linalg.slogdet(np.asarray(M, dtype=float))
    if sign <= 0:
        raise NotPDError("matrix determinant is not positive")
    return float(ld)
