"""Cointegration and error-correction toolkit for annual macroeconomic series."""

__version__ = "0.1.0"

from .data import Dataset, LoadOptions, TimeSeries, align, difference, lag, load_csv, write_csv
from .diagnostics import breusch_godfrey, jarque_bera, jb_from_moments
from .johansen import (
    decide_rank,
    johansen_critical_value,
    johansen_eigen,
    johansen_pvalue,
    johansen_test,
    max_eigen_statistic,
    trace_statistic,
)
from .linalg import chi_square_sf, generalized_eigen, normal_cdf, ols_fit
from .unitroot import LagSpec, adf_critical_values, adf_test, integration_order
from .varselect import fit_var, lag_order_table
from .vecm import causality_matrix, fit_vecm, long_run_causality, wald_short_run

__all__ = [
    "Dataset",
    "LagSpec",
    "LoadOptions",
    "TimeSeries",
    "adf_critical_values",
    "adf_test",
    "align",
    "breusch_godfrey",
    "causality_matrix",
    "chi_square_sf",
    "decide_rank",
    "difference",
    "fit_var",
    "fit_vecm",
    "generalized_eigen",
    "integration_order",
    "jarque_bera",
    "jb_from_moments",
    "johansen_critical_value",
    "johansen_eigen",
    "johansen_pvalue",
    "johansen_test",
    "lag",
    "lag_order_table",
    "load_csv",
    "long_run_causality",
    "max_eigen_statistic",
    "normal_cdf",
    "ols_fit",
    "trace_statistic",
    "wald_short_run",
    "write_csv",
]
