"""Unrestricted VAR estimation and lag-order selection.

With ``T`` the common estimation sample, ``k`` variables, ``p`` lags and
``n = k(kp + 1)`` estimated coefficients (constant included)::

    AIC = ln|S| + 2n/T
    SC  = ln|S| + n ln(T)/T
    HQ  = ln|S| + 2n ln(ln T)/T
    FPE = ((T + kp + 1) / (T - kp - 1))**k * |S|
    LR  = (T - m)(ln|S_{p-1}| - ln|S_p|),  m = kp + 1,  ~ chi2(k**2)

where ``S`` is the ML residual covariance ``E'E/T``. The information
criteria leave out the constant ``k(1 + ln 2 pi)``; dropping it does not
move the minimizing lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, lag_matrix
from .errors import ConfigError, DegreesOfFreedomError
from .linalg import chi_square_ppf, chi_square_sf, logdet_spd

CRITERIA = ("LR", "FPE", "AIC", "SC", "HQ")


@dataclass(frozen=True, eq=False)
class VarFit:
    lag_order: int
    coefs: np.ndarray  # (p, k, k); coefs[j] multiplies Y_{t-j-1}
    intercept: np.ndarray | None
    residual_cov: np.ndarray
    residuals: np.ndarray
    nobs: int
    loglik: float
    names: list

    @property
    def k(self) -> int:
        return self.residual_cov.shape[0]

    @property
    def logdet_sigma(self) -> float:
        return logdet_spd(self.residual_cov)


def _as_array(data) -> tuple[np.ndarray, list[str]]:
    if isinstance(data, Dataset):
        return data.to_array(), data.names
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr, [f"y{i + 1}" for i in range(arr.shape[1])]


def fit_var(data, p: int, deterministics: str = "constant", sample_start: int | None = None) -> VarFit:
    """Equation-by-equation OLS of a VAR(p).

    ``sample_start`` is the index of the first regressand row; it defaults to
    ``p`` and is raised to a common value when comparing lag orders.
    """
    Y, names = _as_array(data)
    if p < 0:
        raise ConfigError("lag order must be non-negative")
    if deterministics not in ("constant", "none"):
        raise ConfigError(f"unsupported deterministics {deterministics!r}")
    start = p if sample_start is None else sample_start
    if start < p:
        raise ConfigError("sample_start cannot precede the lag order")
    n, k = Y.shape
    T = n - start
    n_reg = k * p + (deterministics == "constant")
    if T <= n_reg or T <= k:
        raise DegreesOfFreedomError(f"{T} observations for {n_reg} regressors per equation")

    lags = lag_matrix(Y, p)[start - p :] if p else np.empty((T, 0))
    cols = [lags]
    if deterministics == "constant":
        cols.insert(0, np.ones((T, 1)))
    X = np.hstack(cols)
    Yt = Y[start:]
    if X.shape[1]:
        B, *_ = np.linalg.lstsq(X, Yt, rcond=None)
        E = Yt - X @ B
    else:
        B = np.empty((0, k))
        E = Yt.copy()
    sigma = E.T @ E / T
    offset = 1 if deterministics == "constant" else 0
    coefs = np.array([B[offset + j * k : offset + (j + 1) * k].T for j in range(p)]).reshape(p, k, k)
    sign, ld = np.linalg.slogdet(sigma)
    loglik = -0.5 * T * (k * (1 + math.log(2 * math.pi)) + ld) if sign > 0 else math.inf
    return VarFit(
        lag_order=p,
        coefs=coefs,
        intercept=B[0].copy() if offset else None,
        residual_cov=sigma,
        residuals=E,
        nobs=T,
        loglik=loglik,
        names=names,
    )


@dataclass(frozen=True)
class LagRow:
    lag: int
    loglik: float
    lr: float | None
    lr_pvalue: float | None
    fpe: float
    aic: float
    sc: float
    hq: float

    def value(self, criterion: str):
        return {"LR": self.lr, "FPE": self.fpe, "AIC": self.aic, "SC": self.sc, "HQ": self.hq}[criterion]


@dataclass(frozen=True)
class LagSelectionTable:
    rows: tuple[LagRow, ...]
    selected: dict
    nobs: int
    k: int
    level: float

    @property
    def max_p(self) -> int:
        return len(self.rows) - 1

    def to_dict(self) -> dict:
        return {
            "nobs": self.nobs,
            "k": self.k,
            "level": self.level,
            "rows": [
                {
                    "lag": r.lag,
                    "loglik": r.loglik,
                    "LR": r.lr,
                    "LR_pvalue": r.lr_pvalue,
                    "FPE": r.fpe,
                    "AIC": r.aic,
                    "SC": r.sc,
                    "HQ": r.hq,
                }
                for r in self.rows
            ],
            "selected": dict(self.selected),
        }


def information_criteria(logdet: float, T: int, k: int, p: int) -> dict:
    n = k * (k * p + 1)
    m = k * p + 1
    return {
        "AIC": logdet + 2.0 * n / T,
        "SC": logdet + n * math.log(T) / T,
        "HQ": logdet + 2.0 * n * math.log(math.log(T)) / T,
        "FPE": ((T + m) / (T - m)) ** k * math.exp(logdet),
    }


def star_lags(lr, fpe, aic, sc, hq, k: int, level: float = 0.05) -> dict:
    """Selected lag per criterion from precomputed columns (row i is lag i).

    FPE/AIC/SC/HQ pick their minimum; LR picks the largest lag whose
    sequential test rejects, or 0 if none does. ``lr[0]`` is ignored.
    """
    cv = chi_square_ppf(level, k * k)
    selected = {"LR": 0}
    for p in range(len(lr) - 1, 0, -1):
        if lr[p] is not None and lr[p] > cv:
            selected["LR"] = p
            break
    for name, col in (("FPE", fpe), ("AIC", aic), ("SC", sc), ("HQ", hq)):
        selected[name] = int(np.argmin(np.asarray(col, dtype=float)))
    return selected


def lag_order_table(data, max_p: int = 3, level: float = 0.05) -> LagSelectionTable:
    """Fit VAR(0..max_p) on the sample implied by ``max_p`` and tabulate the criteria."""
    if max_p < 1:
        raise ConfigError("max_p must be at least 1")
    Y, _ = _as_array(data)
    k = Y.shape[1]
    fits = [fit_var(Y, p, sample_start=max_p) for p in range(max_p + 1)]
    T = fits[0].nobs
    rows = []
    prev = None
    for p, fit in enumerate(fits):
        ld = fit.logdet_sigma
        ic = information_criteria(ld, T, k, p)
        lr = pval = None
        if prev is not None:
            lr = (T - (k * p + 1)) * (prev - ld)
            pval = chi_square_sf(max(lr, 0.0), k * k)
        rows.append(LagRow(p, fit.loglik, lr, pval, ic["FPE"], ic["AIC"], ic["SC"], ic["HQ"]))
        prev = ld
    selected = star_lags(
        [r.lr for r in rows],
        [r.fpe for r in rows],
        [r.aic for r in rows],
        [r.sc for r in rows],
        [r.hq for r in rows],
        k,
        level,
    )
    return LagSelectionTable(tuple(rows), selected, T, k, level)
