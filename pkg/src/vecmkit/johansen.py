"""Johansen maximum-likelihood cointegration test.

Deterministic cases follow the usual numbering:

* 2 -- constant restricted to the cointegrating space, no trend in levels
* 3 -- unrestricted constant (linear trend in levels), the default
* 4 -- unrestricted constant plus a trend restricted to the cointegrating space

The 5% critical values are the MacKinnon-Haug-Michelis (1999) numbers used by
common econometrics packages. P-values and the 1%/10% points come from a
simulated percentile grid of the limiting distributions (see
``scripts/simulate_johansen_tables.py``); for one common trend in case 3 the
limit is chi-square(1) and that tail is used directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .data import Dataset, lag_matrix
from .errors import (
    ConfigError,
    DegreesOfFreedomError,
    EigenvalueDomainError,
    NotPDError,
    SingularMomentError,
    TableRangeError,
)
from .linalg import chi_square_ppf, chi_square_sf, generalized_eigen, residualize

DET_CASES = (2, 3, 4)
KINDS = ("trace", "max_eig")
LEVELS = {"10%": 0.10, "5%": 0.05, "1%": 0.01}

# 5% points indexed by k - r = 1..6
_CV5 = {
    ("trace", 2): (9.164546, 20.26184, 35.19275, 54.07904, 76.97277, 103.8473),
    ("trace", 3): (3.841466, 15.49471, 29.79707, 47.85613, 69.81889, 95.75366),
    ("trace", 4): (12.51798, 25.87211, 42.91525, 63.87610, 88.80380, 117.7082),
    ("max_eig", 2): (9.164546, 15.89210, 22.29962, 28.58808, 34.80587, 40.95680),
    ("max_eig", 3): (3.841466, 14.26460, 21.13162, 27.58434, 33.87687, 40.07757),
    ("max_eig", 4): (12.51798, 19.38704, 25.82321, 32.11832, 38.33101, 44.49720),
}
MAX_K_MINUS_R = 6
_SINGULAR_TOL = 1e-12


def _check_case(det_case) -> int:
    try:
        case = int(det_case)
    except (TypeError, ValueError):
        case = None
    if case not in DET_CASES:
        raise ConfigError(f"Johansen deterministic case must be one of {DET_CASES}, got {det_case!r}")
    return case


def _check_kind(kind: str) -> str:
    k = {"max": "max_eig", "maxeig": "max_eig", "max_eigen": "max_eig"}.get(kind, kind)
    if k not in KINDS:
        raise ConfigError(f"statistic kind must be one of {KINDS}, got {kind!r}")
    return k


# -- statistics ---------------------------------------------------------------

def _check_eigenvalues(eigenvalues) -> np.ndarray:
    mu = np.asarray(eigenvalues, dtype=float)
    if np.any(mu >= 1.0) or np.any(mu < 0.0) or not np.all(np.isfinite(mu)):
        raise EigenvalueDomainError("eigenvalues must lie in [0, 1)")
    return mu


def trace_statistic(eigenvalues, T: float, r: int) -> float:
    """``-T * sum_{i>r} ln(1 - mu_i)`` for eigenvalues sorted descending."""
    mu = _check_eigenvalues(eigenvalues)
    if not 0 <= r < mu.size:
        raise ValueError(f"r must lie in [0, {mu.size})")
    return float(-T * np.sum(np.log1p(-mu[r:])))


def max_eigen_statistic(eigenvalues, T: float, r: int) -> float:
    mu = _check_eigenvalues(eigenvalues)
    if not 0 <= r < mu.size:
        raise ValueError(f"r must lie in [0, {mu.size})")
    return float(-T * math.log1p(-mu[r]))


def decide_rank(statistics, critical_values) -> int:
    """Sequential test from r = 0: first r whose statistic does not exceed its critical value."""
    for r, (stat, cv) in enumerate(zip(statistics, critical_values)):
        if stat <= cv:
            return r
    return len(statistics)


# -- tables -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _quantile_grid() -> dict:
    text = resources.files("vecmkit").joinpath("data/johansen_quantiles.json").read_text()
    raw = json.loads(text)
    grid = {}
    probs = np.array(raw["upper_tail_probs"], dtype=float)
    for key, rows in raw["quantiles"].items():
        kind, case = key.rsplit("_case", 1)
        for m, row in enumerate(rows, start=1):
            q = np.array(row, dtype=float)
            cv5 = _CV5.get((kind, int(case)))
            if cv5 is not None and m <= len(cv5):
                # pin the 5% point to the published value so p(cv) == 0.05
                i5 = int(np.argmin(np.abs(probs - 0.05)))
                q[i5] = cv5[m - 1]
            grid[(kind, int(case), m)] = (q, probs)
    return grid


def johansen_critical_value(statistic_kind: str, k_minus_r: int, det_case=3, level: str = "5%") -> float:
    kind = _check_kind(statistic_kind)
    try:
        case = _check_case(det_case)
    except ConfigError as exc:
        raise TableRangeError(str(exc)) from None
    if not 1 <= k_minus_r <= MAX_K_MINUS_R:
        raise TableRangeError(f"k - r = {k_minus_r} outside the tabulated range 1..{MAX_K_MINUS_R}")
    if level == "5%":
        return _CV5[(kind, case)][k_minus_r - 1]
    if level not in LEVELS:
        raise TableRangeError(f"no critical values for level {level!r}")
    if case == 3 and k_minus_r == 1:
        return chi_square_ppf(LEVELS[level], 1)
    q, probs = _quantile_grid()[(kind, case, k_minus_r)]
    return float(q[int(np.argmin(np.abs(probs - LEVELS[level])))])


def johansen_pvalue(statistic_kind: str, k_minus_r: int, det_case, statistic: float) -> float:
    """Upper-tail probability by log-linear interpolation in the percentile grid."""
    kind = _check_kind(statistic_kind)
    case = _check_case(det_case)
    if not 1 <= k_minus_r <= MAX_K_MINUS_R:
        raise TableRangeError(f"k - r = {k_minus_r} outside the tabulated range 1..{MAX_K_MINUS_R}")
    if case == 3 and k_minus_r == 1:
        return chi_square_sf(max(statistic, 0.0), 1)
    q, probs = _quantile_grid()[(kind, case, k_minus_r)]
    if statistic <= 0:
        return 1.0
    logp = np.log(probs)
    if statistic <= q[0]:
        # between the origin (p = 1) and the first grid point
        w = statistic / q[0]
        return float(math.exp(w * logp[0]))
    if statistic >= q[-1]:
        slope = (logp[-1] - logp[-2]) / (q[-1] - q[-2])
        return float(math.exp(logp[-1] + slope * (statistic - q[-1])))
    return float(math.exp(np.interp(statistic, q, logp)))


# -- estimation ---------------------------------------------------------------

def _levels(data) -> tuple[np.ndarray, list[str]]:
    if isinstance(data, Dataset):
        return data.to_array(), data.names
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr, [f"y{i + 1}" for i in range(arr.shape[1])]


@dataclass(frozen=True, eq=False)
class MomentMatrices:
    """Reduced-rank regression pieces on the effective sample of size T."""

    R0: np.ndarray
    R1: np.ndarray
    S00: np.ndarray
    S01: np.ndarray
    S11: np.ndarray
    T: int
    dY: np.ndarray
    Y1: np.ndarray
    Z: np.ndarray


def _restricted_term(det_case: int, n_rows: int, first_row: int) -> np.ndarray | None:
    if det_case == 2:
        return np.ones((n_rows, 1))
    if det_case == 4:
        return np.arange(first_row, first_row + n_rows, dtype=float)[:, None]
    return None


def johansen_moments(data, k_var: int, det_case=3) -> MomentMatrices:
    Y, _ = _levels(data)
    case = _check_case(det_case)
    if k_var < 1:
        raise ConfigError("the VAR lag order must be at least 1")
    n, k = Y.shape
    T = n - k_var
    dY_all = np.diff(Y, axis=0)
    dY = dY_all[k_var - 1 :]
    lagged = lag_matrix(dY_all, k_var - 1)
    Y1 = Y[k_var - 1 : n - 1]
    restricted = _restricted_term(case, T, k_var)
    if restricted is not None:
        Y1 = np.hstack([Y1, restricted])
    Z = lagged
    if case in (3, 4):
        Z = np.hstack([np.ones((T, 1)), Z])
    if T - Z.shape[1] <= Y1.shape[1]:
        raise DegreesOfFreedomError(
            f"{T} effective observations for {Z.shape[1]} short-run and {Y1.shape[1]} level regressors"
        )
    R0 = residualize(dY, Z)
    R1 = residualize(Y1, Z)
    S00 = R0.T @ R0 / T
    S01 = R0.T @ R1 / T
    S11 = R1.T @ R1 / T
    return MomentMatrices(R0, R1, S00, S01, S11, T, dY, Y1, Z)


def normalize_beta(vectors: np.ndarray) -> np.ndarray:
    """Scale each column so its first non-negligible entry equals +1."""
    out = np.array(vectors, dtype=float, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        tol = 1e-12 * max(np.max(np.abs(col)), 1e-300)
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            out[:, j] = col / col[nz[0]]
    return out


def johansen_eigen(data, k_var: int, det_case=3):
    """Solve ``det(mu S11 - S10 S00^-1 S01) = 0``.

    Returns ``(eigenvalues, eigenvectors, moments)``: k eigenvalues in
    descending order and the matching S11-orthonormal eigenvectors (rows for
    each level variable, plus one for a restricted deterministic term).
    """
    mom = johansen_moments(data, k_var, det_case)
    k = mom.S00.shape[0]
    for name, S in (("S00", mom.S00), ("S11", mom.S11)):
        # scale-free check: smallest eigenvalue of the correlation form
        d = np.sqrt(np.clip(np.diag(S), 0.0, None))
        if np.any(d == 0) or np.linalg.eigvalsh(S / np.outer(d, d))[0] < _SINGULAR_TOL:
            raise SingularMomentError(f"{name} is singular; check for collinear or constant series")
    try:
        S00_inv = np.linalg.inv(np.linalg.cholesky(mom.S00))
        S00_inv = S00_inv.T @ S00_inv
        A = mom.S01.T @ S00_inv @ mom.S01
        vals, vecs = generalized_eigen(0.5 * (A + A.T), mom.S11)
    except (np.linalg.LinAlgError, NotPDError):
        raise SingularMomentError("S00 or S11 is singular; check for collinear or constant series") from None
    vals = np.clip(vals[:k], 0.0, None)
    if np.any(vals >= 1.0):
        raise SingularMomentError("eigenvalue at or above one; the system is degenerate")
    return vals, vecs[:, :k], mom


def adjustment_matrix(mom: MomentMatrices, beta: np.ndarray) -> np.ndarray:
    """``alpha = S01 beta (beta' S11 beta)^-1``."""
    if beta.shape[1] == 0:
        return np.empty((mom.S00.shape[0], 0))
    return mom.S01 @ beta @ np.linalg.inv(beta.T @ mom.S11 @ beta)


@dataclass(frozen=True, eq=False)
class JohansenResult:
    variables: list
    det_case: int
    k_var: int
    T: int
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    max_eig_stats: np.ndarray
    critical_values: dict
    p_values: dict
    eigenvectors: np.ndarray
    rank: int
    rank_max_eig: int
    level: str
    moments: MomentMatrices = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.variables)

    def beta_full(self, r: int | None = None) -> np.ndarray:
        """Normalized cointegrating vectors, including a restricted deterministic row."""
        r = self.rank if r is None else r
        return normalize_beta(self.eigenvectors[:, :r])

    def beta_for(self, r: int | None = None) -> np.ndarray:
        return self.beta_full(r)[: self.k]

    def alpha_for(self, r: int | None = None) -> np.ndarray:
        return adjustment_matrix(self.moments, self.beta_full(r))

    @property
    def beta(self) -> np.ndarray:
        return self.beta_for()

    @property
    def alpha(self) -> np.ndarray:
        return self.alpha_for()

    def to_dict(self) -> dict:
        rows = []
        for r in range(self.k):
            rows.append(
                {
                    "r": r,
                    "eigenvalue": float(self.eigenvalues[r]),
                    "trace": float(self.trace_stats[r]),
                    "trace_cv": self.critical_values["trace"][r],
                    "trace_p": self.p_values["trace"][r],
                    "max_eig": float(self.max_eig_stats[r]),
                    "max_eig_cv": self.critical_values["max_eig"][r],
                    "max_eig_p": self.p_values["max_eig"][r],
                }
            )
        beta = self.beta_full()
        return {
            "variables": list(self.variables),
            "det_case": self.det_case,
            "k_var": self.k_var,
            "T": self.T,
            "level": self.level,
            "rows": rows,
            "rank_trace": self.rank,
            "rank_max_eig": self.rank_max_eig,
            "beta": beta.T.tolist(),
            "alpha": self.alpha.T.tolist(),
        }


def johansen_test(data, k_var: int = 2, det_case=3, level: str = "5%") -> JohansenResult:
    """Full Johansen procedure: eigenvalues, both statistics, critical values,
    p-values and the sequential rank decision (from the trace test)."""
    case = _check_case(det_case)
    _, names = _levels(data)
    vals, vecs, mom = johansen_eigen(data, k_var, case)
    k = vals.size
    trace = np.array([trace_statistic(vals, mom.T, r) for r in range(k)])
    maxe = np.array([max_eigen_statistic(vals, mom.T, r) for r in range(k)])
    cvs = {
        kind: [johansen_critical_value(kind, k - r, case, level) for r in range(k)]
        for kind in KINDS
    }
    pvals = {
        kind: [johansen_pvalue(kind, k - r, case, float(stat)) for r, stat in enumerate(stats)]
        for kind, stats in (("trace", trace), ("max_eig", maxe))
    }
    return JohansenResult(
        variables=list(names),
        det_case=case,
        k_var=k_var,
        T=mom.T,
        eigenvalues=vals,
        trace_stats=trace,
        max_eig_stats=maxe,
        critical_values=cvs,
        p_values=pvals,
        eigenvectors=vecs,
        rank=decide_rank(trace, cvs["trace"]),
        rank_max_eig=decide_rank(maxe, cvs["max_eig"]),
        level=level,
        moments=mom,
    )


# -- limiting distributions ---------------------------------------------------

def _asymptotic_block(case: int, m: int, steps: int, reps: int, seed) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((reps, steps, m))
    W = np.cumsum(e, axis=1)
    W_lag = np.concatenate([np.zeros((reps, 1, m)), W[:, :-1]], axis=1)
    trend = np.broadcast_to(np.arange(steps, dtype=float)[None, :, None], (reps, steps, 1))
    if case == 2:
        F = np.concatenate([W_lag, np.ones((reps, steps, 1))], axis=2)
    elif case == 3:
        F = np.concatenate([W_lag[:, :, : m - 1], trend], axis=2)
        F = F - F.mean(axis=1, keepdims=True)
    else:
        F = np.concatenate([W_lag, trend], axis=2)
        F = F - F.mean(axis=1, keepdims=True)
    SFF = np.einsum("rti,rtj->rij", F, F)
    SeF = np.einsum("rti,rtj->rij", e, F)
    M = SeF @ np.linalg.solve(SFF, np.swapaxes(SeF, 1, 2))
    M = 0.5 * (M + np.swapaxes(M, 1, 2))
    eig = np.linalg.eigvalsh(M)
    return eig.sum(axis=1), eig[:, -1]


def simulate_asymptotic_statistics(
    det_case, k_minus_r: int, reps: int, steps: int = 1000, seed: int = 0, block: int = 500
) -> tuple[np.ndarray, np.ndarray]:
    """Draws of (trace, max-eigenvalue) from the discretized limiting distribution
    with ``k_minus_r`` common trends."""
    case = _check_case(det_case)
    nblocks = -(-reps // block)
    seeds = np.random.SeedSequence(seed).spawn(nblocks)
    tr, mx = [], []
    for i, sd in enumerate(seeds):
        a, b = _asymptotic_block(case, k_minus_r, steps, min(block, reps - i * block), sd)
        tr.append(a)
        mx.append(b)
    return np.concatenate(tr), np.concatenate(mx)
