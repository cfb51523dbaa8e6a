import json
import re

import numpy as np
import pytest

from vecmkit.cli import main
from vecmkit.data import Dataset, load_csv, write_csv
from vecmkit.errors import ConfigError
from vecmkit.pipeline import PipelineConfig, PipelineError, run_pipeline
from vecmkit.report import fmt, render, render_johansen
from vecmkit.simulate import ar1, as_dataset, cointegrated_system


@pytest.fixture(scope="module")
def coint_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "coint.csv"
    write_csv(as_dataset(cointegrated_system(200, 3), ["x1", "x2", "x3"]), path)
    return path


@pytest.fixture(scope="module")
def full_report(coint_csv):
    return run_pipeline(PipelineConfig(input=str(coint_csv)))


def _write(tmp_path, data, names, name="d.csv"):
    path = tmp_path / name
    write_csv(as_dataset(data, names), path)
    return path


class TestPipeline:
    def test_full_run(self, full_report):
        r = full_report
        assert r.verdict is None
        assert r.stages_completed == [
            "load", "adf", "integration", "lag_selection", "johansen", "vecm", "causality", "diagnostics"
        ]
        assert r.johansen_table["rank_trace"] >= 1
        assert len(r.causality_table["tests"]) == 6
        assert len(r.causality_table["all"]) == 3
        assert len(r.diagnostics_block) == 3
        assert r.integration == {"x1": 1, "x2": 1, "x3": 1}

    def test_decisions_log_records_defaults(self, full_report):
        log = "\n".join(full_report.decisions_log)
        for key in ("det_case", "lag_criterion", "max_lag", "adf_lag_spec", "k_var", "variables"):
            assert key in log

    def test_explicit_settings_are_not_logged_as_defaults(self, coint_csv):
        cfg = PipelineConfig(
            input=str(coint_csv), variables=["x1", "x2", "x3"], max_lag=2, lag_criterion="SC", det_case=3,
            adf_det_case="constant", adf_lag_spec={"mode": "fixed", "p": 1}, vecm_lag_diffs=1, bg_lags=2,
        )
        log = run_pipeline(cfg).decisions_log
        assert not any("not set" in line for line in log)
        assert any("k_var=2" in line for line in log)

    def test_all_stationary(self, tmp_path):
        rng = np.random.default_rng(1)
        data = np.column_stack([ar1(200, 0.3, rng) for _ in range(3)])
        r = run_pipeline(PipelineConfig(input=str(_write(tmp_path, data, ["a", "b", "c"]))))
        assert r.verdict["kind"] == "AllStationary"
        assert "all I(0)" in r.verdict["message"]
        assert r.johansen_table is None and r.lag_table is None
        assert r.stages_completed[-1] == "integration"

    def test_mixed_integration(self, tmp_path):
        rng = np.random.default_rng(2)
        data = np.column_stack([ar1(200, 0.3, rng), np.cumsum(rng.standard_normal(200))])
        r = run_pipeline(PipelineConfig(input=str(_write(tmp_path, data, ["s", "w"]))))
        assert r.verdict["kind"] == "MixedIntegrationVerdict"
        assert "s: I(0)" in r.verdict["message"] and "w: I(1)" in r.verdict["message"]

    def test_no_cointegration(self, tmp_path):
        rng = np.random.default_rng(3)
        data = np.cumsum(rng.standard_normal((200, 2)) + 0.3, axis=0)
        r = run_pipeline(PipelineConfig(input=str(_write(tmp_path, data, ["a", "b"]))))
        assert r.verdict["kind"] == "NoCointegration"
        assert r.vecm_table is None
        assert r.johansen_table is not None

    def test_empty_variables_fail_before_io(self):
        with pytest.raises(ConfigError):
            run_pipeline(PipelineConfig(input="/nonexistent/file.csv", variables=[]))

    @pytest.mark.parametrize("field,value", [("max_lag", 0), ("level", "2%"), ("det_case", 5), ("format", "xml"),
                                             ("lag_criterion", "BIC"), ("vecm_lag_diffs", 0)])
    def test_config_validation(self, field, value):
        cfg = PipelineConfig(input="x.csv")
        setattr(cfg, field, value)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_unknown_config_key(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"input": "a.csv", "lags": 2})

    def test_stage_error_carries_stage(self, tmp_path):
        x = np.cumsum(np.random.default_rng(4).standard_normal(60))
        with pytest.raises(PipelineError) as exc:
            run_pipeline(PipelineConfig(input=str(_write(tmp_path, np.column_stack([x, x]), ["a", "b"]))))
        assert exc.value.stage in ("lag_selection", "johansen")
        assert exc.value.exit_code == 4

    def test_in_memory_dataset(self):
        ds = as_dataset(cointegrated_system(200, 3), ["x1", "x2", "x3"])
        r = run_pipeline(PipelineConfig(variables=["x1", "x2"]), dataset=ds)
        assert r.sample == [1985, 2184]
        assert r.integration.keys() == {"x1", "x2"}


class TestRender:
    def test_json_round_trip_is_exact(self, full_report):
        doc = json.loads(render(full_report, "json"))
        d = full_report.to_dict()
        assert doc["schema_version"] == "1.0"
        for got, want in zip(doc["johansen_table"]["rows"], d["johansen_table"]["rows"]):
            for key in ("eigenvalue", "trace", "max_eig", "trace_p", "max_eig_p"):
                assert got[key] == want[key]
        for got, want in zip(doc["vecm_table"]["equations"], d["vecm_table"]["equations"]):
            assert got["coefficients"] == want["coefficients"]
            assert got["t_stats"] == want["t_stats"]
        assert [t["chi_square"] for t in doc["causality_table"]["tests"]] == [
            t["chi_square"] for t in d["causality_table"]["tests"]
        ]

    def test_deterministic_bytes(self, coint_csv):
        a = render(run_pipeline(PipelineConfig(input=str(coint_csv), seed=5)), "json")
        b = render(run_pipeline(PipelineConfig(input=str(coint_csv), seed=5)), "json")
        assert a == b

    def test_text_numbers_match_json(self, full_report):
        text = render(full_report, "text").decode()
        d = full_report.to_dict()
        for row in d["johansen_table"]["rows"]:
            for key in ("eigenvalue", "trace", "max_eig"):
                assert fmt(row[key]) in text
                assert abs(float(fmt(row[key])) - row[key]) <= 5e-7
        for row in d["adf_table"]:
            stat = row["constant"]["statistic"]
            assert fmt(stat, row["constant"]["reject"]) in text

    def test_no_grouped_thousands(self, full_report):
        text = render(full_report, "text").decode()
        assert not re.search(r"\d\.\d{3}\.\d", text)
        assert not re.search(r"\d,\d", text)

    def test_star_convention(self):
        assert fmt(-7.143765, True) == "-7.143765*"
        assert fmt(-1.5, False) == "-1.500000"
        assert fmt(float("nan")) == "NA"

    def test_turkish_johansen_headers(self, full_report):
        text = render_johansen(full_report.johansen_table, "tr")
        for label in ("Eşbütünlük", "Özdeğer", "İz İstatistiği", "Kritik Değer", "Olasılık Değeri", "Yoktur", "En Az 1"):
            assert label in text

    def test_english_johansen_headers(self, full_report):
        text = render(full_report, "text").decode()
        for label in ("No. of CE(s)", "Eigenvalue", "Trace Statistic", "Critical Value (5%)", "Prob.", "None", "At most 1"):
            assert label in text

    def test_verdict_report_renders(self, tmp_path):
        rng = np.random.default_rng(1)
        data = np.column_stack([ar1(200, 0.3, rng) for _ in range(2)])
        r = run_pipeline(PipelineConfig(input=str(_write(tmp_path, data, ["a", "b"]))))
        assert "VERDICT (AllStationary)" in render(r, "text").decode()
        assert json.loads(render(r, "json"))["verdict"]["kind"] == "AllStationary"


class TestCli:
    @pytest.mark.parametrize(
        "argv",
        [
            ["adf"],
            ["adf", "--lags", "1", "--format", "json"],
            ["varselect", "--max-lag", "2"],
            ["johansen", "--lags", "2"],
            ["johansen", "--det-case", "2", "--lang", "tr"],
            ["vecm", "--lags", "2", "--rank", "1"],
            ["causality", "--vars", "x1,x2", "--format", "json"],
            ["pipeline"],
        ],
    )
    def test_subcommands_succeed(self, argv, coint_csv, capsys):
        assert main([*argv, "--input", str(coint_csv)]) == 0
        out = capsys.readouterr().out
        assert out
        if "json" in argv:
            assert json.loads(out)["schema_version"] == "1.0"

    def test_pipeline_json_to_file(self, coint_csv, tmp_path):
        out = tmp_path / "report.json"
        assert main(["pipeline", "-i", str(coint_csv), "-f", "json", "-o", str(out)]) == 0
        assert json.loads(out.read_text(encoding="utf-8"))["stages_completed"][-1] == "diagnostics"

    def test_pipeline_config_file(self, coint_csv, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"input": str(coint_csv), "format": "json", "max_lag": 2}))
        assert main(["pipeline", "--config", str(cfg)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["config"]["max_lag"] == 2
        assert len(doc["lag_table"]["rows"]) == 3

    def test_verdict_exits_zero(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        path = _write(tmp_path, np.column_stack([ar1(200, 0.3, rng) for _ in range(2)]), ["a", "b"])
        assert main(["pipeline", "-i", str(path)]) == 0
        assert "AllStationary" in capsys.readouterr().out

    def test_config_error_exit(self, coint_csv, tmp_path, capsys):
        assert main(["pipeline"]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["pipeline", "--config", str(bad)]) == 2
        assert main(["johansen", "-i", str(coint_csv), "--vars", "nope"]) == 2
        assert "error" in capsys.readouterr().err

    def test_data_error_exit(self, tmp_path):
        gap = tmp_path / "gap.csv"
        gap.write_text("year,a,b\n1985,1,2\n1986,,3\n")
        assert main(["adf", "-i", str(gap)]) == 3
        assert main(["adf", "-i", str(tmp_path / "missing.csv")]) == 3
        assert main(["pipeline", "-i", str(gap)]) == 3

    def test_numerical_error_exit(self, tmp_path):
        x = np.cumsum(np.random.default_rng(4).standard_normal(60))
        path = _write(tmp_path, np.column_stack([x, x]), ["a", "b"])
        assert main(["johansen", "-i", str(path)]) == 4
        assert main(["pipeline", "-i", str(path)]) == 4

    def test_decimal_comma_from_env(self, tmp_path, monkeypatch, capsys):
        ds = as_dataset(cointegrated_system(120, 8), ["a", "b", "c"])
        path = tmp_path / "tr.csv"
        write_csv(ds, path, delimiter=";", decimal_separator=",")
        monkeypatch.setenv("VECMKIT_DECIMAL_SEPARATOR", ",")
        assert main(["johansen", "-i", str(path), "--delimiter", ";", "-f", "json"]) == 0
        assert len(json.loads(capsys.readouterr().out)["johansen_table"]["rows"]) == 3

    def test_simulate_writes_loadable_csv(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--kind", "random-walk", "--n", "50", "--seed", "2", "-o", str(out)]) == 0
        ds = load_csv(out)
        assert isinstance(ds, Dataset) and ds.names == ["w1", "w2", "w3"] and ds.nobs == 50
