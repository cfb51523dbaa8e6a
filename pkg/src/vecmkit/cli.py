"""Command-line interface.

Exit codes: 0 success (including verdict-terminated pipelines), 2 configuration
error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .data import LoadOptions, load_csv, write_csv
from .errors import ConfigError, VecmKitError
from .johansen import johansen_test
from .pipeline import (
    PipelineConfig,
    adf_section,
    integration_section,
    lag_spec_from_dict,
    run_pipeline,
)
from .report import (
    render,
    render_adf,
    render_causality,
    render_johansen,
    render_lags,
    render_vecm,
    to_json,
)
from .simulate import ar1, as_dataset, cointegrated_system, random_walk
from .varselect import lag_order_table
from .vecm import block_exogeneity, causality_matrix, fit_vecm, long_run_causality

LEVELS = {"1%": 0.01, "5%": 0.05, "10%": 0.10}


def _split(text):
    return [v.strip() for v in text.split(",") if v.strip()] if text else []


def _add_io(p: argparse.ArgumentParser, need_input: bool = True) -> None:
    p.add_argument("--input", "-i", required=need_input, help="CSV file: a year column plus one column per series")
    p.add_argument("--vars", help="comma-separated columns to analyse (default: all)")
    p.add_argument("--format", "-f", choices=("text", "json"), default="text")
    p.add_argument("--lang", choices=("en", "tr"), default="en", help="text table labels")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--decimal", default=None, help="decimal separator, '.' or ',' (default from VECMKIT_DECIMAL_SEPARATOR or '.')")
    p.add_argument("--year-column", default=None)
    p.add_argument("--log-vars", default=None, help="comma-separated columns to log-transform on load")
    p.add_argument("--level", choices=tuple(LEVELS), default="5%")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def _load(args):
    opts = LoadOptions(
        delimiter=args.delimiter,
        decimal_separator=args.decimal,
        year_column=args.year_column,
        value_columns=tuple(_split(args.vars)) or None,
        log_columns=tuple(_split(args.log_vars)),
    )
    return load_csv(args.input, opts)


def _emit(args, payload: dict, text: str) -> None:
    data = to_json({"schema_version": "1.0", **payload}) if args.format == "json" else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _adf_spec(args):
    if args.lags is not None:
        return lag_spec_from_dict({"mode": "fixed", "p": args.lags})
    return lag_spec_from_dict({"mode": "auto", "p": args.max_lag, "criterion": args.criterion})


def cmd_adf(args):
    ds = _load(args)
    spec = _adf_spec(args)
    rows = adf_section(ds, spec, args.level)
    integ = integration_section(ds, args.det_case, spec, args.level, args.max_d)
    _emit(args, {"adf_table": rows, "integration": integ}, render_adf(rows, integ, args.lang))


def cmd_varselect(args):
    ds = _load(args)
    tab = lag_order_table(ds, args.max_lag, LEVELS[args.level]).to_dict()
    _emit(args, {"lag_table": tab}, render_lags(tab, args.lang))


def _johansen(args, ds):
    return johansen_test(ds, args.lags, args.det_case, args.level)


def cmd_johansen(args):
    ds = _load(args)
    res = _johansen(args, ds).to_dict()
    _emit(args, {"johansen_table": res}, render_johansen(res, args.lang))


def _vecm(args, ds):
    r = args.rank
    if r is None:
        r = min(_johansen(args, ds).rank, len(ds) - 1)
    return fit_vecm(ds, r, args.lags, args.det_case)


def cmd_vecm(args):
    ds = _load(args)
    fit = _vecm(args, ds)
    lr = [long_run_causality(fit, eq.name, s).to_dict() | {"ect": s + 1} for eq in fit.equations for s in range(fit.rank)]
    sec = fit.to_dict()
    _emit(args, {"vecm_table": sec, "long_run": lr}, render_vecm(sec, lr, args.lang))


def cmd_causality(args):
    ds = _load(args)
    fit = _vecm(args, ds)
    alpha = LEVELS[args.level]
    sec = causality_matrix(fit, alpha).to_dict()
    sec["all"] = []
    for v in fit.variables:
        entry = block_exogeneity(fit, v).to_dict()
        entry["significant"] = entry["p_value"] < alpha
        sec["all"].append(entry)
    _emit(args, {"causality_table": sec}, render_causality(sec, args.lang))


def cmd_pipeline(args):
    cfg = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    overrides = {
        "input": args.input,
        "delimiter": None if args.delimiter == "," and args.config else args.delimiter,
        "decimal_separator": args.decimal,
        "year_column": args.year_column,
        "max_lag": args.max_lag,
        "lag_criterion": args.criterion,
        "det_case": args.det_case,
        "adf_det_case": args.adf_det_case,
        "vecm_lag_diffs": args.lag_diffs,
        "bg_lags": args.bg_lags,
        "seed": args.seed,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if args.vars:
        cfg.variables = _split(args.vars)
    if args.log_vars:
        cfg.log_columns = _split(args.log_vars)
    if args.format_set:
        cfg.format = args.format
    if args.level_set:
        cfg.level = args.level
    cfg.validate()
    if not cfg.input:
        raise ConfigError("no input file given (--input or 'input' in the config)")
    report = run_pipeline(cfg)
    data = render(report, cfg.format, args.lang)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_simulate(args):
    rng = np.random.default_rng(args.seed)
    if args.kind == "cointegrated":
        data = cointegrated_system(args.n, rng)
        names = ["x1", "x2", "x3"]
    elif args.kind == "stationary":
        data = np.column_stack([ar1(args.n, 0.3, rng) for _ in range(3)])
        names = ["s1", "s2", "s3"]
    else:
        data = random_walk(args.n, 3, rng)
        names = ["w1", "w2", "w3"]
    ds = as_dataset(data, names, args.start_year)
    text = write_csv(ds, args.output)
    if not args.output:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vecmkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adf", help="ADF unit-root tests and integration order per series")
    _add_io(p)
    p.add_argument("--det-case", choices=("none", "constant", "constant_trend"), default="constant",
                   help="deterministics used for the integration-order decision")
    p.add_argument("--lags", type=int, default=None, help="fixed number of lagged differences")
    p.add_argument("--max-lag", type=int, default=None, help="largest lag for automatic selection")
    p.add_argument("--criterion", choices=("AIC", "SIC"), default="SIC")
    p.add_argument("--max-d", type=int, default=2)
    p.set_defaults(func=cmd_adf)

    p = sub.add_parser("varselect", help="VAR lag-order selection table")
    _add_io(p)
    p.add_argument("--max-lag", type=int, default=3)
    p.set_defaults(func=cmd_varselect)

    for name, func, helptext in (
        ("johansen", cmd_johansen, "Johansen trace and max-eigenvalue tests"),
        ("vecm", cmd_vecm, "VECM estimates with error-correction terms"),
        ("causality", cmd_causality, "Wald short-run causality from a VECM"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_io(p)
        p.add_argument("--lags", type=int, default=2, help="VAR order in levels (lagged differences + 1)")
        p.add_argument("--det-case", type=int, choices=(2, 3, 4), default=3)
        if name != "johansen":
            p.add_argument("--rank", type=int, default=None, help="cointegrating rank (default: trace test)")
        p.set_defaults(func=func)

    p = sub.add_parser("pipeline", help="run every stage and emit a full report")
    _add_io(p, need_input=False)
    p.add_argument("--config", "-c", help="JSON config file; flags override its fields")
    p.add_argument("--max-lag", type=int, default=None)
    p.add_argument("--criterion", choices=("LR", "FPE", "AIC", "SC", "HQ"), default=None)
    p.add_argument("--det-case", type=int, choices=(2, 3, 4), default=None)
    p.add_argument("--adf-det-case", choices=("none", "constant", "constant_trend"), default=None)
    p.add_argument("--lag-diffs", type=int, default=None, help="lagged differences in the VECM")
    p.add_argument("--bg-lags", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("simulate", help="write a synthetic CSV for trying the tools")
    p.add_argument("--kind", choices=("cointegrated", "stationary", "random-walk"), default="cointegrated")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-year", type=int, default=1985)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    # distinguish explicit --format/--level from their defaults for config merging
    args.format_set = any(a in ("--format", "-f") or a.startswith("--format=") for a in argv)
    args.level_set = any(a == "--level" or a.startswith("--level=") for a in argv)
    try:
        args.func(args)
    except VecmKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
