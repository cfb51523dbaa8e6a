"""Text and JSON rendering of pipeline reports.

The JSON form is the source of truth: numbers are written with ``repr``
precision so a parse recovers them bit for bit. The text form prints
statistics with six decimals and marks rejections with ``*``.
"""

from __future__ import annotations

import json
import math

_LABELS = {
    "en": {
        "adf_title": "Unit root tests (ADF)",
        "variable": "Variable",
        "form": "Form",
        "constant": "Constant",
        "constant_trend": "Constant & Trend",
        "level": "Level",
        "first_difference": "First difference",
        "lag_title": "VAR lag order selection",
        "lag": "Lag",
        "joh_title": "Johansen cointegration test",
        "hyp": "No. of CE(s)",
        "eigenvalue": "Eigenvalue",
        "trace": "Trace Statistic",
        "max_eig": "Max-Eigen Statistic",
        "cv": "Critical Value",
        "prob": "Prob.",
        "none": "None",
        "at_most": "At most {r}",
        "vecm_title": "Vector error-correction estimates",
        "ect": "Error correction",
        "causality_title": "Wald short-run causality",
        "dependent": "Dependent",
        "excluded": "Excluded",
        "chi2": "Chi-sq",
        "df": "df",
        "diag_title": "Residual diagnostics",
        "decisions": "Decisions applied",
    },
    "tr": {
        "adf_title": "Durağanlık Testi Sonuçları (ADF)",
        "variable": "Değişkenler",
        "form": "Değişkenin Durumu",
        "constant": "Sabit Trendsiz",
        "constant_trend": "Sabit ve Trendli",
        "level": "Seviye",
        "first_difference": "Birinci Fark",
        "lag_title": "Gecikme Uzunluğunun Belirlenmesi",
        "lag": "Gecikme",
        "joh_title": "Johansen Eşbütünlük Testi Sonuçları",
        "hyp": "Eşbütünlük",
        "eigenvalue": "Özdeğer",
        "trace": "İz İstatistiği",
        "max_eig": "Max. Özdeğer",
        "cv": "Kritik Değer",
        "prob": "Olasılık Değeri",
        "none": "Yoktur",
        "at_most": "En Az {r}",
        "vecm_title": "VECM Sonuçları",
        "ect": "Hata Düzeltme Terimi",
        "causality_title": "Wald Testi Nedensellik Sonuçları",
        "dependent": "Bağımlı değişken",
        "excluded": "Dışlanan",
        "chi2": "Ki-Kare",
        "df": "Serbestlik Derecesi",
        "diag_title": "Destekleyici İstatistik Sonuçları",
        "decisions": "Uygulanan varsayılanlar",
    },
}


def fmt(x, star: bool = False, decimals: int = 6) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float) and not math.isfinite(x):
        return "NA"
    s = f"{x:.{decimals}f}"
    return s + "*" if star else s


def fmt_p(p) -> str:
    return fmt(p, decimals=4)


def table(headers, rows, title=None) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    if title:
        lines.append(title)
        lines.append("=" * max(len(title), sum(widths) + 2 * (len(widths) - 1)))
    for n, r in enumerate(cells):
        line = "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
        lines.append(line.rstrip())
        if n == 0:
            lines.append("-" * len(lines[-1]))
    return "\n".join(lines)


# -- sections -----------------------------------------------------------------

def render_adf(rows, integration=None, lang="en") -> str:
    L = _LABELS[lang]
    body = []
    for row in rows:
        body.append(
            [
                row["variable"],
                L[row["form"]],
                fmt(row["constant"]["statistic"], row["constant"]["reject"]),
                fmt(row["constant_trend"]["statistic"], row["constant_trend"]["reject"]),
            ]
        )
    out = table([L["variable"], L["form"], L["constant"], L["constant_trend"]], body, L["adf_title"])
    if rows:
        cv = rows[0]["constant"]["critical_values"]
        out += "\n* rejects the unit root; 5% critical value (constant) approx. " + fmt(cv["5%"], decimals=3)
    if integration:
        out += "\nIntegration order: " + ", ".join(
            f"{k}=I({v})" if v is not None else f"{k}=undetermined" for k, v in integration.items()
        )
    return out


def render_lags(section, lang="en") -> str:
    L = _LABELS[lang]
    sel = section["selected"]
    body = []
    for r in section["rows"]:
        p = r["lag"]
        body.append(
            [
                str(p),
                fmt(r["loglik"]),
                "NA" if r["LR"] is None else fmt(r["LR"], sel["LR"] == p and p > 0),
                fmt(r["FPE"], sel["FPE"] == p),
                fmt(r["AIC"], sel["AIC"] == p),
                fmt(r["SC"], sel["SC"] == p),
                fmt(r["HQ"], sel["HQ"] == p),
            ]
        )
    out = table([L["lag"], "LogL", "LR", "FPE", "AIC", "SC", "HQ"], body, L["lag_title"])
    out += f"\n* selected lag; T = {section['nobs']}"
    if "chosen_lag" in section:
        out += f"; using {section['chosen_criterion']} -> {section['chosen_lag']}"
    return out


def _hyp(r, L):
    return L["none"] if r == 0 else L["at_most"].format(r=r)


def render_johansen(section, lang="en") -> str:
    L = _LABELS[lang]
    parts = []
    for kind in ("trace", "max_eig"):
        body = []
        for row in section["rows"]:
            stat = row[kind]
            cv = row[f"{kind}_cv"]
            body.append([_hyp(row["r"], L), fmt(row["eigenvalue"]), fmt(stat, stat > cv), fmt(cv), fmt_p(row[f"{kind}_p"])])
        title = f"{L['joh_title']} ({L[kind]})" if not parts else None
        parts.append(table([L["hyp"], L["eigenvalue"], L[kind], f"{L['cv']} ({section['level']})", L["prob"]], body, title))
    rank_line = (
        f"Case {section['det_case']}, k_var={section['k_var']}, T={section['T']}; "
        f"rank by trace = {section['rank_trace']}, by max-eigenvalue = {section['rank_max_eig']}"
    )
    return "\n\n".join(parts) + "\n" + rank_line


def render_vecm(section, long_run=None, lang="en") -> str:
    L = _LABELS[lang]
    eqs = section["equations"]
    names = [e["name"] for e in eqs]
    body = []
    for i, reg in enumerate(eqs[0]["regressors"]):
        label = reg
        if reg.startswith("ECT"):
            label = f"{L['ect']} {reg}"
        row = [label]
        for e in eqs:
            row.append(f"{fmt(e['coefficients'][i])} [{fmt(e['t_stats'][i], decimals=5)}]")
        body.append(row)
    out = table(["", *names], body, L["vecm_title"])
    if long_run:
        out += "\nLong-run causality (lambda < 0 and |t| > 1.96): " + ", ".join(
            f"{lr['equation']}{'' if lr['ect'] == 1 else '/ECT' + str(lr['ect'])}="
            f"{'yes' if lr['significant'] else 'no'}"
            for lr in long_run
        )
    return out


def render_causality(section, lang="en") -> str:
    L = _LABELS[lang]
    body = []
    by_target = {}
    for t in section["tests"]:
        by_target.setdefault(t["target_equation"], []).append(t)
    alls = {a["target_equation"]: a for a in section.get("all", [])}
    for target, tests in by_target.items():
        for t in tests:
            body.append([target, t["source"], fmt(t["chi_square"], t["significant"]), str(t["df"]), fmt_p(t["p_value"])])
        if target in alls:
            a = alls[target]
            body.append([target, "All", fmt(a["chi_square"], a["significant"]), str(a["df"]), fmt_p(a["p_value"])])
    out = table([L["dependent"], L["excluded"], L["chi2"], L["df"], L["prob"]], body, L["causality_title"])
    bi = section.get("bidirectional") or []
    if bi:
        out += "\nBidirectional: " + ", ".join(f"{a} <-> {b}" for a, b in bi)
    return out


def render_diagnostics(block, lang="en") -> str:
    L = _LABELS[lang]
    body = []
    for d in block:
        n, s = d["normality"], d["serial_correlation"]
        body.append(
            [
                d["equation"],
                fmt(n["skewness"]),
                fmt(n["kurtosis"]),
                fmt(n["jarque_bera"]),
                fmt_p(n["p_value"]),
                fmt(s["lm_stat"]),
                fmt_p(s["p_value"]),
                fmt(s["f_stat"]),
            ]
        )
    return table(
        ["Equation", "Skewness", "Kurtosis", "Jarque-Bera", "JB prob.", "LM (BG)", "LM prob.", "F"],
        body,
        L["diag_title"],
    )


def render_text(d: dict, lang: str = "en") -> str:
    L = _LABELS[lang]
    parts = []
    if d.get("sample"):
        parts.append(f"Sample: {d['sample'][0]}-{d['sample'][1]}")
    if d.get("adf_table") is not None:
        parts.append(render_adf(d["adf_table"], d.get("integration"), lang))
    if d.get("lag_table") is not None:
        parts.append(render_lags(d["lag_table"], lang))
    if d.get("johansen_table") is not None:
        parts.append(render_johansen(d["johansen_table"], lang))
    if d.get("vecm_table") is not None:
        parts.append(render_vecm(d["vecm_table"], d.get("long_run"), lang))
    if d.get("causality_table") is not None:
        parts.append(render_causality(d["causality_table"], lang))
    if d.get("diagnostics_block") is not None:
        parts.append(render_diagnostics(d["diagnostics_block"], lang))
    if d.get("verdict"):
        v = d["verdict"]
        parts.append(f"VERDICT ({v['kind']}): {v['message']}")
    if d.get("decisions_log"):
        parts.append(L["decisions"] + ":\n" + "\n".join(f"  - {x}" for x in d["decisions_log"]))
    return "\n\n".join(parts) + "\n"


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return _clean(obj.item())
    return obj


def to_json(d: dict) -> str:
    return json.dumps(_clean(d), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def render(report, format: str = "text", lang: str = "en") -> bytes:
    d = report.to_dict() if hasattr(report, "to_dict") else report
    if format == "json":
        return to_json(d).encode("utf-8")
    if format == "text":
        return render_text(d, lang).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")
