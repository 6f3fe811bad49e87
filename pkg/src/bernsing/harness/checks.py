"""Lemma and theorem verification sweeps.

Every inequality with an unspecified constant is operationalised as a
bounded-ratio sweep: the measured quantity is divided by its claimed
bound, the resulting sequence over the degree sweep must stay within a
factor 4 of itself and show no monotone growth trend (Kendall tau of
ratio against n at most 0.5).  Decay statements are checked as fitted
log-log slopes.
"""
from __future__ import annotations

import math
import numpy as np

from ..basis import _window_weights, central_moment_sum, inverse_moment_sum
from ..blending import TestFunction, bridge_p, fbar_d2, knots
from ..exceptions import Degenerate, MissingExponent
from ..moduli import ModulusConfig, quadrature_bound_ratio, modulus_curve
from ..operator import bbar_apply, bbar_second, build_operator
from ..weights import (
    EvalGrid,
    WeightParams,
    delta_n,
    step_weight,
    varphi,
    wbar,
    weighted_sup_norm,
)
from .config import ExperimentConfig
from .corpus import corpus
from .rates import LemmaResult, RateReport, RateRow, fit_rate

__all__ = [
    "kendall_tau",
    "sequence_verdict",
    "an_sum",
    "lemma6_sum",
    "error_field",
    "second_derivative_field",
    "direct_check",
    "inverse_check",
    "lemma_suite",
    "error_decay",
    "operator_dump",
]

MAX_OVER_MIN = 4.0
TAU_LIMIT = 0.5
# A monotone trend only counts as growth when it accumulates materially;
# without the slack a convergent-from-below sequence with a 1% drift
# would trip the Kendall rule on three points.
TREND_SLACK = 1.25
SLOPE_TOL = 0.15
DIRECT_GROWTH = 2.0


def kendall_tau(values) -> float:
    """Kendall tau of the sequence against its index (ties count zero)."""
    v = list(values)
    m = len(v)
    if m < 2:
        return 0.0
    conc = 0
    for i in range(m):
        for j in range(i + 1, m):
            if v[j] > v[i]:
                conc += 1
            elif v[j] < v[i]:
                conc -= 1
    return conc / (m * (m - 1) / 2)


def sequence_verdict(ratios, max_over_min: float = MAX_OVER_MIN,
                     tau_limit: float = TAU_LIMIT) -> tuple[bool, str]:
    """Pass rule for a bounded-constant sweep: spread within a factor
    max_over_min, and no monotone growth trend (Kendall tau above
    tau_limit with more than TREND_SLACK accumulated growth)."""
    r = np.asarray(ratios, dtype=float)
    if not np.isfinite(r).all() or (r <= 0).any():
        return False, "non-finite or non-positive ratio"
    spread = float(r.max() / r.min())
    tau = kendall_tau(r)
    ok = spread <= max_over_min and not (tau > tau_limit and spread > TREND_SLACK)
    return ok, f"max/min={spread:.3g} tau={tau:.2f}"


def _window(n: int, xi: float) -> tuple[int, int]:
    s = math.sqrt(n)
    return max(0, math.ceil(n * xi - s)), min(n, math.floor(n * xi + s))


def an_sum(n: int, params: WeightParams, x: float) -> float:
    """wbar(x) times the basis mass of the indices within sqrt(n) of
    n*xi (the samples the bridge replaces)."""
    klo, khi = _window(n, params.xi)
    if klo > khi:
        return 0.0
    return wbar(params, x) * float(_window_weights(n, klo, khi, x).sum())


def lemma6_sum(n: int, params: WeightParams, beta: float, x: float) -> float:
    """wbar(x) * sum over the same index window of |k - n x|^beta p_{n,k}(x)."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0,1]")
    klo, khi = _window(n, params.xi)
    if klo > khi:
        return 0.0
    w = _window_weights(n, klo, khi, x)
    d = np.abs(np.arange(klo, khi + 1, dtype=float) - n * x)
    return wbar(params, x) * float(np.dot(w, d**beta))


def error_field(f: TestFunction, n: int, params: WeightParams, grid: EvalGrid) -> np.ndarray:
    """Pointwise weighted error wbar * |f - operator(f)| on the grid."""
    op = build_operator(f, n, params)
    x = grid.points
    err = wbar(params, x) * np.abs(np.asarray(f.eval(x), float) - bbar_apply(op, x))
    if np.isnan(err).any():
        raise ValueError(f"error field of {f.name or 'f'} has NaNs")
    return err


def second_derivative_field(f: TestFunction, n: int, params: WeightParams,
                            grid: EvalGrid) -> np.ndarray:
    """|second derivative of the operator polynomial| on the grid."""
    op = build_operator(f, n, params)
    return np.abs(bbar_second(op, grid.points))


def _scale_field(n: int, sw, x: np.ndarray) -> np.ndarray:
    """Per-x comparison scale delta_n(x) / (sqrt(n) phi(x))."""
    phi = np.maximum(step_weight(sw, x), 1e-300)
    return delta_n(n, x) / (math.sqrt(n) * phi)


def _tabulated_modulus(f, params, sw, grid, scales, h_steps=12, t_points=24):
    """Monotone log-log interpolant of the modulus curve covering the
    given scales (clipped into (0, 1/4])."""
    lo = max(min(float(s.min()) for s in scales) * 0.999, 1e-8)
    lo = min(lo, 0.25)
    tt = np.geomspace(lo, 0.25, t_points)
    cfg = ModulusConfig(x_grid=grid, t_values=tuple(tt), h_steps=h_steps)
    curve = modulus_curve(f, params, sw, cfg)
    lt = np.log(tt)
    lc = np.log(np.maximum(curve, 1e-300))

    def lookup(s: np.ndarray) -> np.ndarray:
        return np.exp(np.interp(np.log(np.clip(s, tt[0], 0.25)), lt, lc))

    return lookup


def direct_check(cfg: ExperimentConfig) -> RateReport:
    """Jackson-type direction: for each degree, the grid sup of
    weighted error divided by the weighted modulus at the local scale
    delta_n(x)/(sqrt(n) phi(x)).  Passes when the ratio sequence is
    finite and does not grow (last/first <= 2); points where both
    sides vanish are skipped, and a vanishing modulus under a
    non-vanishing error is an inconsistency reported as Degenerate.
    """
    if not cfg.sw.theorem_admissible:
        raise ValueError("direct_check needs min(beta0, beta1) >= 1/2")
    f = corpus(cfg.function_name, cfg.params, cfg.alpha0)
    grid = cfg.make_grid()
    x = grid.points
    scales = {n: _scale_field(n, cfg.sw, x) for n in cfg.n_values}
    lookup = _tabulated_modulus(f, cfg.params, cfg.sw, grid, list(scales.values()))
    atol = 1e-11 * max(1.0, weighted_sup_norm(f, cfg.params, grid))
    rows = []
    ratios = []
    for n in cfg.n_values:
        err = error_field(f, n, cfg.params, grid)
        mod = lookup(scales[n])
        live = (err > atol) | (mod > atol)
        bad = live & (mod <= atol)
        if bad.any():
            i = int(np.argmax(bad))
            raise Degenerate(
                f"modulus vanishes at x={x[i]!r} (n={n}) where the error does not"
            )
        if live.any():
            q = err[live] / mod[live]
            i = int(np.argmax(q))
            idx = np.flatnonzero(live)[i]
            rows.append(RateRow(scale=float(n), measured=float(err[idx]),
                                reference=float(mod[idx]), ratio=float(q[i])))
            ratios.append(float(q[i]))
        else:
            rows.append(RateRow(scale=float(n), measured=0.0, reference=0.0, ratio=0.0))
            ratios.append(0.0)
    pos = [r for r in ratios if r > 0.0]
    ok = all(math.isfinite(r) for r in ratios) and (not pos or pos[-1] / pos[0] <= DIRECT_GROWTH)
    slope = stderr = None
    residuals: tuple = ()
    if len(pos) == len(ratios) and len(pos) >= 4:
        fit = fit_rate(list(zip(cfg.n_values, ratios)), scale_name="n")
        slope, stderr, residuals = fit.fitted_slope, fit.slope_stderr, fit.residuals
    return RateReport(
        scale_name="n",
        rows=tuple(rows),
        fitted_slope=slope,
        slope_stderr=stderr,
        residuals=residuals,
        max_ratio=max(ratios) if ratios else 0.0,
        verdict="pass" if ok else "fail",
        tolerance=DIRECT_GROWTH,
    )


def inverse_check(cfg: ExperimentConfig) -> RateReport:
    """Bernstein-type direction at desk scale: (a) the fitted slope of
    the weighted modulus against t must recover the nominal exponent
    alpha0 within 0.15, and (b) the weighted error normalised by the
    local scale to the power alpha0 must be a bounded sequence over the
    degree sweep (max/min <= 4).  Rows carry the normalised error
    sequence; the slope fields carry the modulus-side fit.
    """
    if not cfg.sw.theorem_admissible:
        raise ValueError("inverse_check needs min(beta0, beta1) >= 1/2")
    f = corpus(cfg.function_name, cfg.params, cfg.alpha0)
    if f.alpha0 is None:
        raise MissingExponent(f"{f.name} has no nominal smoothness exponent")
    a0 = f.alpha0
    grid = cfg.make_grid()
    x = grid.points
    mcfg = ModulusConfig(x_grid=grid, t_values=cfg.t_values, h_steps=16)
    curve = modulus_curve(f, cfg.params, cfg.sw, mcfg)
    fit = fit_rate(list(zip(cfg.t_values, curve)), scale_name="t")
    s2 = fit.fitted_slope
    seq = []
    for n in cfg.n_values:
        err = error_field(f, n, cfg.params, grid)
        seq.append(float(np.max(err * _scale_field(n, cfg.sw, x) ** -a0)))
    first = seq[0]
    rows = tuple(
        RateRow(scale=float(n), measured=e, reference=first,
                ratio=e / first if first > 0 else math.inf)
        for n, e in zip(cfg.n_values, seq)
    )
    if min(seq) <= 0.0 or not all(map(math.isfinite, seq)):
        bounded = False
        spread = math.inf
    else:
        spread = max(seq) / min(seq)
        bounded = spread <= MAX_OVER_MIN
    ok = bounded and abs(s2 - a0) <= SLOPE_TOL
    return RateReport(
        scale_name="n",
        rows=rows,
        fitted_slope=s2,
        slope_stderr=fit.slope_stderr,
        residuals=fit.residuals,
        max_ratio=spread,
        verdict="pass" if ok else "fail",
        tolerance=SLOPE_TOL,
    )


def _restrict(grid: EvalGrid, lo: float, hi: float) -> np.ndarray:
    x = grid.points
    return x[(x >= lo) & (x <= hi)]


def _lemma1(cfg, grid) -> LemmaResult:
    xs = _restrict(grid, 0.1, 0.9)
    worst = 0.0
    details = []
    ok = True
    for u, v in ((0.5, 0.0), (1.0, 0.0), (1.0, 1.0)):
        seq = [
            max(
                inverse_moment_sum(n, u, v, float(t)) / (t**-u * (1.0 - t) ** -v)
                for t in xs
            )
            for n in cfg.n_values
        ]
        good, note = sequence_verdict(seq)
        ok &= good
        worst = max(worst, max(seq))
        details.append(f"(u={u:g},v={v:g}) {note}")
    return LemmaResult("lemma1", "pass" if ok else "fail", worst, "; ".join(details))


def _lemma2(cfg, grid, f) -> LemmaResult:
    nwf = weighted_sup_norm(f, cfg.params, grid)
    x = grid.points
    w = wbar(cfg.params, x)
    seq = []
    for n in cfg.n_values:
        op = build_operator(f, n, cfg.params)
        seq.append(float(np.max(w * np.abs(bbar_apply(op, x)))) / nwf)
    good, note = sequence_verdict(seq)
    return LemmaResult("lemma2", "pass" if good else "fail", max(seq), f"{f.name}: {note}")


def _lemma3(cfg) -> LemmaResult:
    if not cfg.sw.theorem_admissible:
        return LemmaResult("lemma3", "skip", None, "min(beta0, beta1) >= 1/2 violated")
    t_values = (0.125, 0.0625, 0.03125)
    seq = []
    for t in t_values:
        xs = sorted(
            {c * t for c in (1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)}
            | {1.0 - c * t for c in (1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)}
            | {0.3, 0.4, 0.5, 0.6, 0.7}
        )
        xs = [x for x in xs if t < x < 1.0 - t]
        seq.append(max(quadrature_bound_ratio(cfg.sw, t, x) for x in xs))
    good, note = sequence_verdict(seq)
    return LemmaResult("lemma3", "pass" if good else "fail", max(seq),
                       f"t in {t_values}: {note}")


def _lemma4(cfg, grid) -> LemmaResult:
    xs = _restrict(grid, 0.1, 0.9)
    worst = 0.0
    ok = True
    details = []
    for g in (1.0, 2.0, 3.0):
        seq = [
            max(
                central_moment_sum(n, g, float(t)) / (n ** (g / 2) * varphi(float(t)) ** g)
                for t in xs
            )
            for n in cfg.n_values
        ]
        good, note = sequence_verdict(seq)
        ok &= good
        worst = max(worst, max(seq))
        details.append(f"gamma={g:g} {note}")
    return LemmaResult("lemma4", "pass" if ok else "fail", worst, "; ".join(details))


def _lemma5(cfg, grid) -> LemmaResult:
    if len(cfg.n_values) < 4:
        return LemmaResult("lemma5", "skip", None, "need >= 4 degrees for a slope fit")
    seq = [
        max(an_sum(n, cfg.params, float(t)) for t in grid.points) for n in cfg.n_values
    ]
    fit = fit_rate(list(zip(cfg.n_values, seq)), scale_name="n")
    bound = -cfg.params.alpha / 2.0 + 0.1
    ok = fit.fitted_slope is not None and fit.fitted_slope <= bound
    return LemmaResult(
        "lemma5",
        "pass" if ok else "fail",
        fit.fitted_slope,
        f"slope={fit.fitted_slope:.4f} must be <= {bound:.4f}",
    )


def _lemma6(cfg, grid) -> LemmaResult:
    xs = _restrict(grid, 0.1, 0.9)
    a = cfg.params.alpha
    worst = 0.0
    ok = True
    details = []
    for b in (1.0, 2.0):
        seq = [
            max(
                lemma6_sum(n, cfg.params, b, float(t))
                / (n ** ((b - a) / 2.0) * varphi(float(t)) ** b)
                for t in xs
            )
            for n in cfg.n_values
        ]
        good, note = sequence_verdict(seq)
        ok &= good
        worst = max(worst, max(seq))
        details.append(f"beta={b:g} {note}")
    return LemmaResult("lemma6", "pass" if ok else "fail", worst, "; ".join(details))


def _w2phi_function(cfg, f) -> TestFunction:
    if f.in_w2phi and f.d2 is not None:
        return f
    return corpus("quadratic", cfg.params)


def _lemma7(cfg, grid, f) -> LemmaResult:
    if not cfg.sw.theorem_admissible:
        return LemmaResult("lemma7", "skip", None, "min(beta0, beta1) >= 1/2 violated")
    g = _w2phi_function(cfg, f)
    x = grid.points
    d2norm = float(
        np.max(wbar(cfg.params, x) * step_weight(cfg.sw, x) ** 2 * np.abs(g.d2(x)))
    )
    seq = []
    for n in cfg.n_values:
        k = knots(n, cfg.params.xi)
        xz = x[(x >= k.x1) & (x <= k.x4)]
        num = wbar(cfg.params, xz) * np.abs(np.asarray(g.eval(xz), float) - bridge_p(g, k, xz))
        den = _scale_field(n, cfg.sw, xz) ** 2 * d2norm
        seq.append(float(np.max(num / den)))
    good, note = sequence_verdict(seq)
    return LemmaResult("lemma7", "pass" if good else "fail", max(seq), f"{g.name}: {note}")


def _lemma8(cfg, grid, f) -> LemmaResult:
    if not cfg.sw.theorem_admissible:
        return LemmaResult("lemma8", "skip", None, "min(beta0, beta1) >= 1/2 violated")
    g = _w2phi_function(cfg, f)
    x = grid.points
    w2 = wbar(cfg.params, x) * step_weight(cfg.sw, x) ** 2
    d2norm = float(np.max(w2 * np.abs(g.d2(x))))
    seq = []
    for n in cfg.n_values:
        k = knots(n, cfg.params.xi)
        seq.append(float(np.max(w2 * np.abs(fbar_d2(g, k, x)))) / d2norm)
    good, note = sequence_verdict(seq)
    return LemmaResult("lemma8", "pass" if good else "fail", max(seq), f"{g.name}: {note}")


def lemma_suite(cfg: ExperimentConfig) -> dict[str, LemmaResult]:
    """All bounded-constant and decay checks, keyed lemma1..lemma8.

    Checks whose hypotheses the configuration violates are skipped with
    the reason recorded; each executed check reports its measured
    constant (worst ratio over the sweep, or the fitted slope for the
    decay check).
    """
    grid = cfg.make_grid()
    f = corpus(cfg.function_name, cfg.params, cfg.alpha0)
    results = {
        "lemma1": _lemma1(cfg, grid),
        "lemma2": _lemma2(cfg, grid, f),
        "lemma3": _lemma3(cfg),
        "lemma4": _lemma4(cfg, grid),
        "lemma5": _lemma5(cfg, grid),
        "lemma6": _lemma6(cfg, grid),
        "lemma7": _lemma7(cfg, grid, f),
        "lemma8": _lemma8(cfg, grid, f),
    }
    return results


def error_decay(cfg: ExperimentConfig) -> RateReport:
    """Raw error-decay table: grid sup of the weighted error per degree
    with its fitted log-log rate."""
    f = corpus(cfg.function_name, cfg.params, cfg.alpha0)
    grid = cfg.make_grid()
    seq = [float(np.max(error_field(f, n, cfg.params, grid))) for n in cfg.n_values]
    if len(seq) >= 4 and min(seq) > 0.0:
        return fit_rate(list(zip(cfg.n_values, seq)), scale_name="n")
    rows = tuple(
        RateRow(scale=float(n), measured=e, reference=0.0, ratio=0.0)
        for n, e in zip(cfg.n_values, seq)
    )
    return RateReport(
        scale_name="n",
        rows=rows,
        fitted_slope=None,
        slope_stderr=None,
        residuals=(),
        max_ratio=0.0,
        verdict="pass" if all(map(math.isfinite, seq)) else "fail",
        tolerance=0.0,
    )


def operator_dump(cfg: ExperimentConfig) -> dict:
    """Knots and spliced samples of the largest configured degree."""
    n = cfg.n_values[-1]
    f = corpus(cfg.function_name, cfg.params, cfg.alpha0)
    op = build_operator(f, n, cfg.params)
    k = op.knots
    return {
        "function": f.name,
        "n": n,
        "xi": cfg.params.xi,
        "alpha": cfg.params.alpha,
        "knots": {"x1": k.x1, "x2": k.x2, "x3": k.x3, "x4": k.x4},
        "samples": [float(s) for s in op.fbar_samples],
    }
