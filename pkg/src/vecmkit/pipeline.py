"""End-to-end orchestration: ADF -> lag selection -> Johansen -> VECM ->
causality -> residual diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .data import Dataset, LoadOptions, difference, load_csv
from .diagnostics import breusch_godfrey, jarque_bera
from .errors import ConfigError, OrderUndeterminedError, VecmKitError
from .johansen import johansen_test
from .unitroot import LagSpec, adf_test, integration_order, normalize_det_case
from .varselect import CRITERIA, lag_order_table
from .vecm import block_exogeneity, causality_matrix, fit_vecm, long_run_causality

SCHEMA_VERSION = "1.0"
LEVELS = {"1%": 0.01, "5%": 0.05, "10%": 0.10}

_DEFAULTS = {
    "max_lag": 3,
    "lag_criterion": "AIC",
    "det_case": 3,
    "adf_det_case": "constant",
    "adf_lag_spec": {"mode": "auto", "p": None, "criterion": "SIC"},
    "bg_lags": 2,
}


class PipelineError(VecmKitError):
    """A stage failed; ``exit_code`` follows the underlying cause."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage} stage failed: {cause}")

    @property
    def exit_code(self) -> int:
        return getattr(self.cause, "exit_code", 4)


@dataclass
class PipelineConfig:
    input: str | None = None
    variables: list | None = None
    delimiter: str = ","
    decimal_separator: str | None = None
    year_column: str | None = None
    log_columns: list = field(default_factory=list)
    max_lag: int | None = None
    lag_criterion: str | None = None
    det_case: int | None = None
    adf_det_case: str | None = None
    adf_lag_spec: dict | None = None
    vecm_lag_diffs: int | None = None
    bg_lags: int | None = None
    level: str = "5%"
    format: str = "text"
    seed: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(d)

    def validate(self) -> None:
        if self.variables is not None and not self.variables:
            raise ConfigError("variables must be a non-empty list")
        if self.variables and len(set(self.variables)) != len(self.variables):
            raise ConfigError("variables must be unique")
        if self.max_lag is not None and self.max_lag < 1:
            raise ConfigError("max_lag must be at least 1")
        if self.level not in LEVELS:
            raise ConfigError(f"level must be one of {list(LEVELS)}")
        if self.format not in ("text", "json"):
            raise ConfigError("format must be 'text' or 'json'")
        if self.lag_criterion is not None and self.lag_criterion not in CRITERIA:
            raise ConfigError(f"lag_criterion must be one of {CRITERIA}")
        if self.det_case is not None and self.det_case not in (2, 3, 4):
            raise ConfigError("det_case must be 2, 3 or 4")
        if self.adf_det_case is not None:
            normalize_det_case(self.adf_det_case)
        if self.vecm_lag_diffs is not None and self.vecm_lag_diffs < 1:
            raise ConfigError("vecm_lag_diffs must be at least 1 for Wald tests")
        if self.bg_lags is not None and self.bg_lags < 1:
            raise ConfigError("bg_lags must be at least 1")

    def load_options(self) -> LoadOptions:
        return LoadOptions(
            delimiter=self.delimiter,
            decimal_separator=self.decimal_separator,
            year_column=self.year_column,
            value_columns=tuple(self.variables) if self.variables else None,
            log_columns=tuple(self.log_columns),
        )

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class Report:
    config: dict
    sample: list | None = None
    adf_table: list | None = None
    integration: dict | None = None
    lag_table: dict | None = None
    johansen_table: dict | None = None
    vecm_table: dict | None = None
    long_run: list | None = None
    causality_table: dict | None = None
    diagnostics_block: list | None = None
    verdict: dict | None = None
    decisions_log: list = field(default_factory=list)
    stages_completed: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "generator": f"vecmkit {__version__}",
            "config": self.config,
            "sample": self.sample,
            "stages_completed": list(self.stages_completed),
            "verdict": self.verdict,
            "adf_table": self.adf_table,
            "integration": self.integration,
            "lag_table": self.lag_table,
            "johansen_table": self.johansen_table,
            "vecm_table": self.vecm_table,
            "long_run": self.long_run,
            "causality_table": self.causality_table,
            "diagnostics_block": self.diagnostics_block,
            "decisions_log": list(self.decisions_log),
        }


# -- stage helpers (also used by the standalone CLI commands) -----------------

def lag_spec_from_dict(d: dict | None) -> LagSpec:
    d = d or _DEFAULTS["adf_lag_spec"]
    mode = d.get("mode", "auto")
    if mode == "fixed":
        if d.get("p") is None:
            raise ConfigError("fixed ADF lag spec needs 'p'")
        return LagSpec.fixed(int(d["p"]))
    if mode != "auto":
        raise ConfigError(f"unknown ADF lag mode {mode!r}")
    return LagSpec.auto(d.get("p"), d.get("criterion", "SIC"))


def adf_section(ds: Dataset, lag_spec: LagSpec, level: str = "5%") -> list:
    """Table-5 style block: level and first difference, constant and constant+trend."""
    rows = []
    for s in ds.series:
        for form, series in (("level", s), ("first_difference", difference(s, 1))):
            row = {"variable": s.name, "form": form}
            for case in ("constant", "constant_trend"):
                res = adf_test(series, case, lag_spec)
                row[case] = {**res.to_dict(), "reject": res.reject(level)}
            rows.append(row)
    return rows


def integration_section(ds: Dataset, det_case: str, lag_spec: LagSpec, level: str = "5%", max_d: int = 2) -> dict:
    out = {}
    for s in ds.series:
        try:
            out[s.name] = integration_order(s, det_case, lag_spec, max_d, level)
        except OrderUndeterminedError:
            out[s.name] = None
    return out


def diagnostics_section(vecm, bg_lags: int) -> list:
    block = []
    for eq in vecm.equations:
        jb = jarque_bera(eq.fit.residuals)
        bg = breusch_godfrey(eq.fit, lags=bg_lags)
        block.append({"equation": eq.name, "normality": jb.to_dict(), "serial_correlation": bg.to_dict()})
    return block


def _stage(name: str, report: Report, fn, *args, **kw):
    try:
        out = fn(*args, **kw)
    except VecmKitError as exc:
        raise PipelineError(name, exc) from exc
    except (np.linalg.LinAlgError, ValueError, ArithmeticError) as exc:
        raise PipelineError(name, exc) from exc
    report.stages_completed.append(name)
    return out


def run_pipeline(cfg: PipelineConfig, dataset: Dataset | None = None) -> Report:
    """Run every stage in order; an explanatory verdict ends the run early
    when a stage's precondition fails (mixed integration, rank 0)."""
    cfg.validate()
    report = Report(config=cfg.to_dict())
    log = report.decisions_log

    def default(name):
        value = getattr(cfg, name)
        if value is None:
            value = _DEFAULTS[name]
            log.append(f"{name} not set; using default {value!r}")
        return value

    max_lag = default("max_lag")
    criterion = default("lag_criterion")
    det_case = default("det_case")
    adf_case = normalize_det_case(default("adf_det_case"))
    adf_spec = lag_spec_from_dict(default("adf_lag_spec"))
    bg_lags = default("bg_lags")
    level = cfg.level
    alpha = LEVELS[level]

    if dataset is None:
        if not cfg.input:
            raise ConfigError("config has no input file")
        ds = _stage("load", report, load_csv, cfg.input, cfg.load_options())
    else:
        ds = _stage("load", report, dataset.select, cfg.variables or dataset.names)
    if cfg.variables is None:
        log.append(f"variables not set; using every column: {ds.names}")
    else:
        ds = ds.select(cfg.variables)
    report.sample = list(ds.sample)

    report.adf_table = _stage("adf", report, adf_section, ds, adf_spec, level)
    report.integration = _stage("integration", report, integration_section, ds, adf_case, adf_spec, level)
    orders = list(report.integration.values())
    if not all(d == 1 for d in orders):
        if all(d == 0 for d in orders):
            kind, msg = "AllStationary", "all I(0): every series is stationary in levels; cointegration analysis does not apply"
        else:
            kind, msg = "MixedIntegrationVerdict", (
                "mixed integration orders "
                + ", ".join(f"{k}: {'undetermined' if v is None else f'I({v})'}" for k, v in report.integration.items())
                + "; the Johansen procedure requires every series to be I(1)"
            )
        report.verdict = {"kind": kind, "message": msg, "stage": "integration"}
        return report

    lag_table = _stage("lag_selection", report, lag_order_table, ds, max_lag, alpha)
    report.lag_table = lag_table.to_dict()
    p = lag_table.selected[criterion]
    report.lag_table["chosen_criterion"] = criterion
    report.lag_table["chosen_lag"] = p

    if cfg.vecm_lag_diffs is None:
        lag_diffs = max(p - 1, 1)
        if p - 1 < 1:
            log.append(
                f"selected VAR lag {p} leaves no lagged differences; using 1 lagged difference "
                f"(k_var=2) so short-run Wald tests are defined"
            )
        else:
            log.append(f"vecm_lag_diffs not set; using selected lag {p} - 1 = {lag_diffs}")
    else:
        lag_diffs = cfg.vecm_lag_diffs
    k_var = lag_diffs + 1
    log.append(f"Johansen and VECM both use k_var={k_var} ({lag_diffs} lagged difference(s))")

    jres = _stage("johansen", report, johansen_test, ds, k_var, det_case, level)
    report.johansen_table = jres.to_dict()
    r = jres.rank
    if r == 0:
        report.verdict = {
            "kind": "NoCointegration",
            "message": "trace test does not reject r=0; a VECM is not applicable",
            "stage": "johansen",
        }
        return report
    if r >= len(ds):
        log.append(f"trace test rejects every rank up to {len(ds) - 1}; VECM rank capped at {len(ds) - 1}")
        r = len(ds) - 1
        if r == 0:
            report.verdict = {"kind": "NoCointegration", "message": "single series: no VECM", "stage": "johansen"}
            return report

    vecm = _stage("vecm", report, fit_vecm, ds, r, k_var, det_case)
    report.vecm_table = vecm.to_dict()
    report.long_run = [
        long_run_causality(vecm, eq.name, s).to_dict() | {"ect": s + 1}
        for eq in vecm.equations
        for s in range(r)
    ]

    def _causality():
        cm = causality_matrix(vecm, alpha)
        d = cm.to_dict()
        d["all"] = [block_exogeneity(vecm, v).to_dict() for v in vecm.variables]
        for entry in d["all"]:
            entry["significant"] = entry["p_value"] < alpha
        return d

    report.causality_table = _stage("causality", report, _causality)
    report.diagnostics_block = _stage("diagnostics", report, diagnostics_section, vecm, bg_lags)
    return report
