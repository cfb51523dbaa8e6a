"""Augmented Dickey-Fuller unit-root test.

The test regression is

    dy_t = [a] + [b t] + g y_{t-1} + sum_{i=1..p} d_i dy_{t-i} + e_t

and the statistic is the t-ratio on ``g``. Critical values come from
MacKinnon's (1991) response surfaces, ``b_inf + b1/T + b2/T**2``, and can be
re-derived with :func:`simulate_df_statistics`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import TimeSeries, difference
from .errors import (
    ConfigError,
    DegreesOfFreedomError,
    OrderUndeterminedError,
    SampleTooSmallError,
    ZeroVarianceError,
)
from .linalg import ols_fit

DET_CASES = ("none", "constant", "constant_trend")
_ALIASES = {"n": "none", "nc": "none", "c": "constant", "ct": "constant_trend", "trend": "constant_trend"}
LEVELS = ("1%", "5%", "10%")

# (b_inf, b1, b2) per level
_RESPONSE_SURFACE = {
    "none": {
        "1%": (-2.5658, -1.960, -10.04),
        "5%": (-1.9393, -0.398, 0.0),
        "10%": (-1.6156, -0.181, 0.0),
    },
    "constant": {
        "1%": (-3.4336, -5.999, -29.25),
        "5%": (-2.8621, -2.738, -8.36),
        "10%": (-2.5671, -1.438, -4.48),
    },
    "constant_trend": {
        "1%": (-3.9638, -8.353, -47.44),
        "5%": (-3.4126, -4.039, -17.83),
        "10%": (-3.1279, -2.418, -7.58),
    },
}


def normalize_det_case(det_case: str) -> str:
    key = _ALIASES.get(det_case, det_case)
    if key not in DET_CASES:
        raise ConfigError(f"unknown ADF deterministic case {det_case!r}; expected one of {DET_CASES}")
    return key


@dataclass(frozen=True)
class LagSpec:
    """Either a fixed lag count or automatic selection over 0..max_p."""

    mode: str = "auto"
    p: int | None = None
    criterion: str = "SIC"

    @classmethod
    def fixed(cls, p: int) -> "LagSpec":
        if p < 0:
            raise ConfigError("lag count must be non-negative")
        return cls("fixed", p)

    @classmethod
    def auto(cls, max_p: int | None = None, criterion: str = "SIC") -> "LagSpec":
        crit = criterion.upper()
        if crit in ("SC", "BIC"):
            crit = "SIC"
        if crit not in ("AIC", "SIC"):
            raise ConfigError(f"unknown lag criterion {criterion!r}")
        if max_p is not None and max_p < 0:
            raise ConfigError("max_p must be non-negative")
        return cls("auto", max_p, crit)

    def max_lag(self, n: int) -> int:
        if self.p is not None:
            return self.p
        # Schwert's rule, capped so at least 10 observations remain
        return max(0, min(int(12 * (n / 100.0) ** 0.25), n - 10))

    def to_dict(self) -> dict:
        return {"mode": self.mode, "p": self.p, "criterion": self.criterion}


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    det_case: str
    lags_used: int
    critical_values: dict
    reject_at_5pct: bool
    nobs: int
    max_lag: int

    def reject(self, level: str = "5%") -> bool:
        return self.statistic < self.critical_values[level]

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "det_case": self.det_case,
            "lags_used": self.lags_used,
            "max_lag": self.max_lag,
            "nobs": self.nobs,
            "critical_values": dict(self.critical_values),
            "reject_at_5pct": self.reject_at_5pct,
        }


def adf_critical_values(det_case: str, nobs: float) -> dict:
    """Finite-sample 1%, 5% and 10% critical values (pass ``math.inf`` for the limit)."""
    det_case = normalize_det_case(det_case)
    if nobs < 20:
        raise SampleTooSmallError(f"response surfaces need nobs >= 20, got {nobs}")
    inv = 0.0 if math.isinf(nobs) else 1.0 / nobs
    return {
        level: b0 + b1 * inv + b2 * inv * inv
        for level, (b0, b1, b2) in _RESPONSE_SURFACE[det_case].items()
    }


def _design(y: np.ndarray, p: int, first: int, det_case: str) -> tuple[np.ndarray, np.ndarray]:
    """Regressand and regressors for rows ``first..`` of the differenced series.

    Column 0 is always the lagged level.
    """
    dy = np.diff(y)
    rows = np.arange(first, dy.size)
    cols = [y[rows]]
    cols.extend(dy[rows - i] for i in range(1, p + 1))
    if det_case in ("constant", "constant_trend"):
        cols.append(np.ones(rows.size))
    if det_case == "constant_trend":
        cols.append(rows + 1.0)
    return dy[rows], np.column_stack(cols)


def _criterion(fit, name: str) -> float:
    n, k = fit.nobs, fit.nparams
    pen = 2.0 * k if name == "AIC" else k * math.log(n)
    return (-2.0 * fit.loglik + pen) / n


def adf_test(s, det_case: str = "constant", lag_spec: LagSpec | int | None = None) -> AdfResult:
    """Run the ADF regression on ``s`` (a TimeSeries or a 1-d array).

    Automatic selection fits every candidate lag on the sample implied by the
    largest one, then re-estimates the chosen lag on its full sample.
    """
    det_case = normalize_det_case(det_case)
    y = np.asarray(s.values if isinstance(s, TimeSeries) else s, dtype=float)
    if isinstance(lag_spec, int):
        lag_spec = LagSpec.fixed(lag_spec)
    spec = lag_spec or LagSpec.auto()
    n = y.size
    max_p = spec.max_lag(n)
    if n < max_p + 10:
        raise DegreesOfFreedomError(f"{n} observations are too few for {max_p} lags")

    dy = np.diff(y)
    if np.ptp(dy) == 0.0:
        raise ZeroVarianceError("differenced series has no variation")

    if spec.mode == "fixed":
        p = max_p
    else:
        best = None
        for cand in range(max_p + 1):
            target, X = _design(y, cand, max_p, det_case)
            fit = ols_fit(X, target)
            if fit.sigma2 <= 0:
                raise ZeroVarianceError("ADF regression fits exactly")
            value = _criterion(fit, spec.criterion)
            if best is None or value < best[0] - 1e-12:
                best = (value, cand)
        p = best[1]

    target, X = _design(y, p, p, det_case)
    if target.size <= X.shape[1]:
        raise DegreesOfFreedomError(f"{target.size} usable observations for {X.shape[1]} parameters")
    fit = ols_fit(X, target)
    if fit.sigma2 <= 1e-24 * max(1.0, float(np.var(target))) or fit.stderr[0] == 0:
        raise ZeroVarianceError("ADF regression fits exactly; the series is deterministic")
    stat = float(fit.t_stats[0])
    # below 20 observations the T=20 surface is the closest available
    cvs = adf_critical_values(det_case, max(fit.nobs, 20))
    return AdfResult(
        statistic=stat,
        det_case=det_case,
        lags_used=p,
        critical_values=cvs,
        reject_at_5pct=stat < cvs["5%"],
        nobs=fit.nobs,
        max_lag=max_p,
    )


def integration_order(
    s: TimeSeries,
    det_case: str = "constant",
    lag_spec: LagSpec | int | None = None,
    max_d: int = 2,
    level: str = "5%",
) -> int:
    """Smallest d <= max_d whose d-th difference rejects the unit root."""
    if not isinstance(s, TimeSeries):
        s = TimeSeries("y", 0, s)
    for d in range(max_d + 1):
        x = s if d == 0 else difference(s, d)
        if adf_test(x, det_case, lag_spec).reject(level):
            return d
    raise OrderUndeterminedError(f"{getattr(s, 'name', 'series')}: no rejection up to d={max_d}")


# -- Monte Carlo --------------------------------------------------------------

def _df_block(det_case: str, nobs: int, reps: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((reps, nobs + 1))
    y = np.cumsum(e, axis=1)
    dy = np.diff(y, axis=1)
    cols = [y[:, :-1]]
    if det_case != "none":
        cols.append(np.ones((reps, nobs)))
    if det_case == "constant_trend":
        cols.append(np.broadcast_to(np.arange(1.0, nobs + 1), (reps, nobs)))
    X = np.stack(cols, axis=2)
    XtX = np.einsum("rti,rtj->rij", X, X)
    Xty = np.einsum("rti,rt->ri", X, dy)
    b = np.linalg.solve(XtX, Xty[..., None])[..., 0]
    resid = dy - np.einsum("rti,ri->rt", X, b)
    s2 = np.einsum("rt,rt->r", resid, resid) / (nobs - X.shape[2])
    inv00 = np.linalg.inv(XtX)[:, 0, 0]
    return b[:, 0] / np.sqrt(s2 * inv00)


def simulate_df_statistics(
    det_case: str,
    nobs: int,
    reps: int,
    seed: int = 0,
    block: int = 1000,
    workers: int = 1,
) -> np.ndarray:
    """Dickey-Fuller t-statistics under the random-walk null.

    Each block of ``block`` replications draws from its own child seed, so
    the output does not depend on ``workers``.
    """
    det_case = normalize_det_case(det_case)
    nblocks = -(-reps // block)
    seeds = np.random.SeedSequence(seed).spawn(nblocks)
    sizes = [min(block, reps - i * block) for i in range(nblocks)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _df_block(det_case, nobs, *a), zip(sizes, seeds)))
    else:
        parts = [_df_block(det_case, nobs, m, sd) for m, sd in zip(sizes, seeds)]
    return np.concatenate(parts)


def simulate_df_quantiles(det_case: str, nobs: int, reps: int, seed: int = 0, **kw) -> dict:
    stats = simulate_df_statistics(det_case, nobs, reps, seed, **kw)
    return {lvl: float(np.quantile(stats, float(lvl[:-1]) / 100)) for lvl in LEVELS}
