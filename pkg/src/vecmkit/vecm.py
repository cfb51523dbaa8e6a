"""Vector error-correction model and causality tests.

Each equation is estimated by OLS::

    dY_i,t = c_i + sum_j sum_l g_ilj dY_l,t-j + sum_s lambda_is ECT_s,t-1 + e_i,t

with ``ECT_{t-1} = beta' Y_{t-1}`` built from normalized Johansen vectors.
Short-run (Wald) causality restricts the lagged differences of one variable;
the ECT coefficients are reported on their own as long-run causality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import lag_matrix
from .errors import ConfigError, DegreesOfFreedomError, NoCointegrationError, NothingToTestError
from .johansen import _check_case, _levels, _restricted_term, johansen_eigen, normalize_beta
from .linalg import RegressionFit, chi_square_sf, ols_fit

LONG_RUN_CRITICAL = 1.96


@dataclass(frozen=True, eq=False)
class EquationFit:
    name: str
    fit: RegressionFit
    regressors: list
    rank: int
    lag_diffs: int
    k: int
    has_intercept: bool

    def _index(self, label: str) -> int:
        return self.regressors.index(label)

    @property
    def intercept(self) -> float | None:
        return float(self.fit.coefficients[0]) if self.has_intercept else None

    @property
    def ect_coeffs(self) -> np.ndarray:
        return self.fit.coefficients[-self.rank :]

    @property
    def ect_tstats(self) -> np.ndarray:
        return self.fit.t_stats[-self.rank :]

    @property
    def ect_coeff(self) -> float:
        return float(self.ect_coeffs[0])

    @property
    def ect_tstat(self) -> float:
        return float(self.ect_tstats[0])

    def _short_run(self, values: np.ndarray) -> np.ndarray:
        start = 1 if self.has_intercept else 0
        block = values[start : start + self.lag_diffs * self.k]
        return block.reshape(self.lag_diffs, self.k)

    @property
    def short_run(self) -> np.ndarray:
        """(lag_diffs, k): entry [j, l] multiplies dY_l,t-j-1."""
        return self._short_run(self.fit.coefficients)

    @property
    def short_run_stderr(self) -> np.ndarray:
        return self._short_run(self.fit.stderr)

    @property
    def short_run_tstats(self) -> np.ndarray:
        return self._short_run(self.fit.t_stats)


@dataclass(frozen=True, eq=False)
class VecmFit:
    variables: list
    rank: int
    lag_diffs: int
    det_case: int
    beta: np.ndarray
    equations: list
    ect_series: np.ndarray
    residuals: np.ndarray
    design: np.ndarray
    regressors: list
    dY: np.ndarray

    @property
    def T(self) -> int:
        return self.dY.shape[0]

    def equation(self, name) -> EquationFit:
        if isinstance(name, int):
            return self.equations[name]
        for eq in self.equations:
            if eq.name == name:
                return eq
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "rank": self.rank,
            "lag_diffs": self.lag_diffs,
            "det_case": self.det_case,
            "T": self.T,
            "beta": self.beta.T.tolist(),
            "equations": [
                {
                    "name": eq.name,
                    "intercept": eq.intercept,
                    "ect_coeffs": eq.ect_coeffs.tolist(),
                    "ect_tstats": eq.ect_tstats.tolist(),
                    "regressors": list(eq.regressors),
                    "coefficients": eq.fit.coefficients.tolist(),
                    "stderr": eq.fit.stderr.tolist(),
                    "t_stats": eq.fit.t_stats.tolist(),
                    "sigma2": eq.fit.sigma2,
                }
                for eq in self.equations
            ],
        }


def error_correction_term(beta, y_lag) -> np.ndarray:
    """``beta' Y_{t-1}`` for one row or a (T, k) block of lagged levels."""
    beta = np.asarray(beta, dtype=float)
    if beta.ndim == 1:
        beta = beta[:, None]
    return np.asarray(y_lag, dtype=float) @ beta


def fit_vecm(data, r: int, k_var: int = 2, det_case=3, beta=None) -> VecmFit:
    """Estimate the VECM with cointegrating rank ``r``.

    ``k_var`` is the VAR order in levels, so ``k_var - 1`` lagged differences
    enter each equation. Without an explicit ``beta`` the first ``r``
    normalized Johansen vectors are used.
    """
    case = _check_case(det_case)
    if r < 1:
        raise NoCointegrationError("rank 0: no error-correction term to estimate")
    if k_var < 1:
        raise ConfigError("k_var must be at least 1")
    Y, names = _levels(data)
    n, k = Y.shape
    if r > k:
        raise ConfigError(f"rank {r} exceeds the number of variables {k}")
    restricted = _restricted_term(case, n - k_var, k_var)
    if beta is None:
        _, vecs, _ = johansen_eigen(Y, k_var, case)
        beta = normalize_beta(vecs[:, :r])
    beta = np.asarray(beta, dtype=float)
    if beta.ndim == 1:
        beta = beta[:, None]
    expected_rows = k + (restricted is not None)
    if beta.shape != (expected_rows, r):
        raise ConfigError(f"beta must have shape ({expected_rows}, {r}), got {beta.shape}")

    lag_diffs = k_var - 1
    T = n - k_var
    dY_all = np.diff(Y, axis=0)
    dY = dY_all[lag_diffs:]
    Y1 = Y[k_var - 1 : n - 1]
    if restricted is not None:
        Y1 = np.hstack([Y1, restricted])
    ect = error_correction_term(beta, Y1)

    cols, labels = [], []
    has_intercept = case in (3, 4)
    if has_intercept:
        cols.append(np.ones((T, 1)))
        labels.append("const")
    if lag_diffs:
        cols.append(lag_matrix(dY_all, lag_diffs))
        labels.extend(f"D({v})(-{j})" for j in range(1, lag_diffs + 1) for v in names)
    cols.append(ect)
    labels.extend(f"ECT{s + 1}(-1)" for s in range(r))
    X = np.hstack(cols)
    if T <= X.shape[1]:
        raise DegreesOfFreedomError(f"{T} observations for {X.shape[1]} regressors per equation")

    equations = []
    resid = np.empty_like(dY)
    for i, name in enumerate(names):
        fit = ols_fit(X, dY[:, i])
        resid[:, i] = fit.residuals
        equations.append(EquationFit(name, fit, labels, r, lag_diffs, k, has_intercept))
    return VecmFit(
        variables=list(names),
        rank=r,
        lag_diffs=lag_diffs,
        det_case=case,
        beta=beta,
        equations=equations,
        ect_series=ect,
        residuals=resid,
        design=X,
        regressors=labels,
        dY=dY,
    )


# -- long run -----------------------------------------------------------------

@dataclass(frozen=True)
class LongRunResult:
    equation: str
    lambda_: float
    tstat: float
    significant: bool

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "lambda": self.lambda_,
            "tstat": self.tstat,
            "significant": self.significant,
        }


def is_long_run_significant(lam: float, tstat: float, critical: float = LONG_RUN_CRITICAL) -> bool:
    """Negative adjustment coefficient with |t| above the two-sided normal point."""
    return bool(lam < 0 and abs(tstat) > critical)


def long_run_causality(fit: VecmFit, equation, ect_index: int = 0, critical: float = LONG_RUN_CRITICAL) -> LongRunResult:
    eq = fit.equation(equation)
    lam = float(eq.ect_coeffs[ect_index])
    t = float(eq.ect_tstats[ect_index])
    return LongRunResult(eq.name, lam, t, is_long_run_significant(lam, t, critical))


# -- short run ----------------------------------------------------------------

@dataclass(frozen=True)
class WaldResult:
    chi_square: float
    df: int
    p_value: float
    target_equation: str
    excluded_block: tuple
    source: str | None = None

    def significant(self, level: float = 0.05) -> bool:
        return self.p_value < level

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target_equation": self.target_equation,
            "chi_square": self.chi_square,
            "df": self.df,
            "p_value": self.p_value,
            "excluded_block": list(self.excluded_block),
        }


def wald_statistic(coefficients, cov, indices) -> float:
    """``(Rb)' [R V R']^{-1} (Rb)`` where R selects ``indices``."""
    b = np.asarray(coefficients, dtype=float)[indices]
    V = np.asarray(cov, dtype=float)[np.ix_(indices, indices)]
    return float(b @ np.linalg.solve(V, b))


def wald_short_run(fit: VecmFit, target_equation, source_variable) -> WaldResult:
    """Joint test that every lagged difference of ``source_variable`` is zero
    in the ``target_equation`` equation."""
    if fit.lag_diffs == 0:
        raise NothingToTestError("the VECM has no lagged differences to restrict")
    eq = fit.equation(target_equation)
    if source_variable not in fit.variables:
        raise KeyError(source_variable)
    labels = [f"D({source_variable})(-{j})" for j in range(1, fit.lag_diffs + 1)]
    idx = [eq.regressors.index(lbl) for lbl in labels]
    stat = max(wald_statistic(eq.fit.coefficients, eq.fit.cov, idx), 0.0)
    return WaldResult(
        chi_square=stat,
        df=len(idx),
        p_value=chi_square_sf(stat, len(idx)),
        target_equation=eq.name,
        excluded_block=tuple(labels),
        source=source_variable,
    )


@dataclass(frozen=True)
class CausalityMatrix:
    results: dict  # (source, target) -> WaldResult
    level: float

    def significant(self, source: str, target: str) -> bool:
        return self.results[(source, target)].significant(self.level)

    @property
    def bidirectional(self) -> list:
        pairs = []
        for (src, tgt) in self.results:
            if src < tgt and (tgt, src) in self.results:
                if self.significant(src, tgt) and self.significant(tgt, src):
                    pairs.append((src, tgt))
        return pairs

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "tests": [
                {**res.to_dict(), "significant": res.significant(self.level)}
                for res in self.results.values()
            ],
            "bidirectional": [list(p) for p in self.bidirectional],
        }


def causality_matrix(fit: VecmFit, level: float = 0.05) -> CausalityMatrix:
    results = {}
    for target in fit.variables:
        for source in fit.variables:
            if source != target:
                results[(source, target)] = wald_short_run(fit, target, source)
    return CausalityMatrix(results, level)


def block_exogeneity(fit: VecmFit, target_equation, level: float = 0.05) -> WaldResult:
    """Joint test excluding the lagged differences of every other variable."""
    if fit.lag_diffs == 0:
        raise NothingToTestError("the VECM has no lagged differences to restrict")
    eq = fit.equation(target_equation)
    labels = [
        f"D({v})(-{j})"
        for j in range(1, fit.lag_diffs + 1)
        for v in fit.variables
        if v != eq.name
    ]
    idx = [eq.regressors.index(lbl) for lbl in labels]
    stat = max(wald_statistic(eq.fit.coefficients, eq.fit.cov, idx), 0.0)
    return WaldResult(stat, len(idx), chi_square_sf(stat, len(idx)), eq.name, tuple(labels), "All")
