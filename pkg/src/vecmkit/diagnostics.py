"""Residual diagnostics: Jarque-Bera normality and Breusch-Godfrey LM."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .errors import DegreesOfFreedomError, ZeroVarianceError
from .linalg import RegressionFit, chi_square_sf, ols_fit


@dataclass(frozen=True)
class NormalityReport:
    nobs: int
    mean: float
    median: float
    max: float
    min: float
    std_dev: float
    skewness: float
    kurtosis: float
    jarque_bera: float
    p_value: float

    def to_dict(self) -> dict:
        return asdict(self)


def jb_from_moments(skewness: float, kurtosis: float, n: int) -> tuple[float, float]:
    """JB = n (S^2/6 + (K-3)^2/24) with its chi-square(2) p-value.

    ``kurtosis`` is the raw fourth-moment ratio, not excess kurtosis.
    """
    if n < 8:
        raise DegreesOfFreedomError("Jarque-Bera needs at least 8 observations")
    jb = n * (skewness**2 / 6.0 + (kurtosis - 3.0) ** 2 / 24.0)
    return jb, chi_square_sf(jb, 2)


def jarque_bera(x) -> NormalityReport:
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < 8:
        raise DegreesOfFreedomError("Jarque-Bera needs at least 8 observations")
    dev = x - x.mean()
    m2 = float(np.mean(dev**2))
    if m2 <= 1e-28 * max(1.0, float(np.max(np.abs(x))) ** 2):
        raise ZeroVarianceError("sample has no variance")
    skew = float(np.mean(dev**3)) / m2**1.5
    kurt = float(np.mean(dev**4)) / m2**2
    jb, p = jb_from_moments(skew, kurt, n)
    return NormalityReport(
        nobs=n,
        mean=float(x.mean()),
        median=float(np.median(x)),
        max=float(x.max()),
        min=float(x.min()),
        std_dev=float(x.std(ddof=1)),
        skewness=skew,
        kurtosis=kurt,
        jarque_bera=jb,
        p_value=p,
    )


@dataclass(frozen=True)
class BreuschGodfreyResult:
    lm_stat: float
    p_value: float
    f_stat: float
    f_p_value: float
    lags: int
    nobs: int
    rsquared_aux: float

    def to_dict(self) -> dict:
        return asdict(self)


def breusch_godfrey(design, residuals=None, lags: int = 2) -> BreuschGodfreyResult:
    """LM test for serial correlation up to order ``lags``.

    Accepts a :class:`RegressionFit` or an explicit (design, residuals) pair.
    Pre-sample lagged residuals are set to zero so the auxiliary regression
    keeps all ``n`` observations; ``LM = n R^2`` of that regression.
    """
    if isinstance(design, RegressionFit):
        X, u = design.design, design.residuals
    else:
        X = np.asarray(design, dtype=float)
        u = np.asarray(residuals, dtype=float).ravel()
    if X.ndim == 1:
        X = X[:, None]
    if lags < 1:
        raise ValueError("lags must be positive")
    n = u.size
    if n <= X.shape[1] + lags:
        raise DegreesOfFreedomError(f"{n} observations for {X.shape[1]} regressors and {lags} lags")
    if float(u @ u) <= 1e-28 * n:
        raise ZeroVarianceError("residuals are identically zero")

    U = np.zeros((n, lags))
    for j in range(1, lags + 1):
        U[j:, j - 1] = u[:-j]
    aux = ols_fit(np.hstack([X, U]), u)
    # uncentered R^2 equals the centered one when X spans a constant
    r2 = 1.0 - aux.rss / float(u @ u)
    lm = n * r2
    df2 = n - X.shape[1] - lags
    f = (r2 / lags) / ((1.0 - r2) / df2) if r2 < 1 else np.inf
    return BreuschGodfreyResult(
        lm_stat=lm,
        p_value=chi_square_sf(max(lm, 0.0), lags),
        f_stat=float(f),
        f_p_value=float(stats.f.sf(f, lags, df2)),
        lags=lags,
        nobs=n,
        rsquared_aux=r2,
    )
