"""Rate fitting and deterministic report serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

__all__ = [
    "RateRow",
    "RateReport",
    "LemmaResult",
    "fit_rate",
    "report_to_csv",
    "report_to_json",
    "lemma_results_to_csv",
    "lemma_results_to_json",
]


@dataclass(frozen=True)
class RateRow:
    scale: float
    measured: float
    reference: float
    ratio: float


@dataclass(frozen=True)
class RateReport:
    """One experiment's table plus its log-log fit and verdict.

    ``scale_name`` says what the scale column is ('n' or 't');
    ``fitted_slope`` is None when the data was degenerate (all zeros)."""

    scale_name: str
    rows: tuple
    fitted_slope: float | None
    slope_stderr: float | None
    residuals: tuple
    max_ratio: float
    verdict: str
    tolerance: float


@dataclass(frozen=True)
class LemmaResult:
    lemma: str
    verdict: str  # pass | fail | skip
    constant: float | None
    detail: str


def fit_rate(pairs, scale_name: str = "scale") -> RateReport:
    """Least-squares slope of ln(value) against ln(scale).

    Needs at least 4 pairs with positive entries.  Row references are
    the fitted power law, so row ratios read as multiplicative
    residuals.
    """
    pts = [(float(s), float(v)) for s, v in pairs]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 pairs to fit a rate, got {len(pts)}")
    if any(s <= 0.0 or v <= 0.0 for s, v in pts):
        raise ValueError("rate fitting needs positive scales and values")
    ls = np.log([s for s, _ in pts])
    lv = np.log([v for _, v in pts])
    m = ls.size
    sxx = float(np.sum((ls - ls.mean()) ** 2))
    slope = float(np.sum((ls - ls.mean()) * (lv - lv.mean())) / sxx)
    intercept = float(lv.mean() - slope * ls.mean())
    resid = lv - (intercept + slope * ls)
    ssr = float(np.sum(resid**2))
    stderr = math.sqrt(ssr / (m - 2) / sxx) if m > 2 else 0.0
    rows = []
    for (s, v), r in zip(pts, resid):
        ref = math.exp(intercept) * s**slope
        rows.append(RateRow(scale=s, measured=v, reference=ref, ratio=v / ref))
    max_ratio = max(r.ratio for r in rows)
    return RateReport(
        scale_name=scale_name,
        rows=tuple(rows),
        fitted_slope=slope,
        slope_stderr=stderr,
        residuals=tuple(float(r) for r in resid),
        max_ratio=max_ratio,
        verdict="pass" if math.isfinite(slope) and math.isfinite(stderr) else "fail",
        tolerance=0.0,
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def report_to_csv(report: RateReport) -> str:
    """Rows only, fixed column order, 17 significant digits, LF endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([report.scale_name, "measured", "reference", "ratio"])
    for r in report.rows:
        w.writerow([_fmt(r.scale), _fmt(r.measured), _fmt(r.reference), _fmt(r.ratio)])
    return buf.getvalue()


def report_to_json(report: RateReport) -> str:
    payload = asdict(report)
    payload["rows"] = [asdict(r) for r in report.rows]
    payload["residuals"] = list(report.residuals)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def lemma_results_to_csv(results: dict[str, LemmaResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lemma", "verdict", "constant", "detail"])
    for key in sorted(results):
        r = results[key]
        w.writerow([r.lemma, r.verdict, _fmt(r.constant), r.detail])
    return buf.getvalue()


def lemma_results_to_json(results: dict[str, LemmaResult]) -> str:
    payload = {k: asdict(r) for k, r in results.items()}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
