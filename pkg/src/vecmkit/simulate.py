"""Synthetic data generators used by the tests, the acceptance suite and the
``simulate`` CLI command."""

from __future__ import annotations

import numpy as np

from .data import Dataset


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_walk(n: int, k: int = 1, seed=None, drift: float = 0.0) -> np.ndarray:
    e = _rng(seed).standard_normal((n, k)) + drift
    out = np.cumsum(e, axis=0)
    return out[:, 0] if k == 1 else out


def ar1(n: int, phi: float, seed=None, burn: int = 100) -> np.ndarray:
    rng = _rng(seed)
    e = rng.standard_normal(n + burn)
    y = np.empty_like(e)
    y[0] = e[0]
    for t in range(1, y.size):
        y[t] = phi * y[t - 1] + e[t]
    return y[burn:]


def simulate_vecm(
    n: int,
    alpha,
    beta,
    gammas=(),
    intercept=None,
    sigma=1.0,
    seed=None,
    burn: int = 50,
    y0=None,
) -> np.ndarray:
    """Levels from ``dY_t = c + alpha beta' Y_{t-1} + sum_j G_j dY_{t-j} + e_t``.

    ``sigma`` is a scalar standard deviation or a (k, k) covariance matrix.
    """
    rng = _rng(seed)
    alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
    beta = np.atleast_2d(np.asarray(beta, dtype=float))
    if alpha.shape[0] == 1 and beta.shape[0] > 1:
        alpha = alpha.T
    if beta.shape[0] == 1 and alpha.shape[0] > 1:
        beta = beta.T
    k = alpha.shape[0]
    gammas = [np.asarray(g, dtype=float) for g in gammas]
    c = np.zeros(k) if intercept is None else np.asarray(intercept, dtype=float)
    if np.ndim(sigma) == 0:
        chol = float(sigma) * np.eye(k)
    else:
        chol = np.linalg.cholesky(np.asarray(sigma, dtype=float))
    total = n + burn
    e = rng.standard_normal((total, k)) @ chol.T
    Y = np.zeros((total, k))
    dY = np.zeros((total, k))
    if y0 is not None:
        Y[0] = y0
    pi = alpha @ beta.T
    for t in range(1, total):
        d = c + pi @ Y[t - 1] + e[t]
        for j, g in enumerate(gammas, start=1):
            if t - j >= 1:
                d = d + g @ dY[t - j]
        dY[t] = d
        Y[t] = Y[t - 1] + d
    return Y[burn:]


def cointegrated_pair(n: int, lam=(-0.4, 0.1), seed=None, gamma=None, sigma=1.0, intercept=None) -> np.ndarray:
    """Bivariate system with beta = (1, -1) and adjustment speeds ``lam``."""
    gammas = () if gamma is None else (gamma,)
    return simulate_vecm(n, np.asarray(lam, dtype=float)[:, None], [[1.0], [-1.0]], gammas,
                         intercept=intercept, sigma=sigma, seed=seed)


def shared_trend_pair(n: int, seed=None, noise: float = 1.0) -> np.ndarray:
    """y1 is a random walk and y2 = y1 + stationary noise."""
    rng = _rng(seed)
    w = np.cumsum(rng.standard_normal(n))
    return np.column_stack([w + noise * rng.standard_normal(n), w + noise * rng.standard_normal(n)])


def cointegrated_system(n: int = 200, seed=None) -> np.ndarray:
    """Three I(1) variables tied by one cointegrating relation, with short-run feedback."""
    alpha = np.array([[-0.35], [0.15], [0.05]])
    beta = np.array([[1.0], [-0.8], [-0.5]])
    gamma = np.array([[0.2, 0.25, 0.0], [0.3, 0.1, 0.0], [0.0, 0.35, 0.1]])
    return simulate_vecm(n, alpha, beta, (gamma,), intercept=[0.1, 0.05, 0.02], seed=seed)


def as_dataset(data, names=None, start_year: int = 1985) -> Dataset:
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    names = list(names) if names else [f"y{i + 1}" for i in range(data.shape[1])]
    return Dataset.from_array(data, names, start_year)
