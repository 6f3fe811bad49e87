"""Weighted second-order modulus of smoothness and a constructive
upper bound for the main-part K-functional."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .blending import TestFunction
from .exceptions import Degenerate, Inadmissible, MissingDerivative
from .weights import EvalGrid, StepWeight, WeightParams, step_weight, wbar

__all__ = [
    "ModulusConfig",
    "second_difference",
    "weighted_modulus",
    "modulus_curve",
    "k_functional_upper",
    "steklov_means",
    "quadrature_bound_ratio",
]

# Translates of a second difference may not approach the singularity by
# more than this fraction of the step h*phi(x).  Without the guard the
# grid sup for functions unbounded at xi is dominated by accidental
# near-hits of the translate lattice on xi, which scale like the weight
# exponent instead of the smoothness exponent.  The trimmed set grows
# back to the formal sup as the fraction tends to 0.
REL_STEP_TUBE = 0.25

T_MAX = 0.25


@dataclass(frozen=True)
class ModulusConfig:
    """Discretization of the double sup: h runs over geometric ladders
    of h_steps points (spanning two decades below each anchor scale),
    x over the given grid; t_values are the anchor scales."""

    x_grid: EvalGrid
    t_values: tuple
    h_steps: int = 16

    def __post_init__(self):
        if self.h_steps < 8:
            raise ValueError("h_steps must be at least 8")
        ts = np.asarray(self.t_values, dtype=float)
        if ts.size == 0 or ts.min() <= 0.0 or ts.max() > T_MAX:
            raise ValueError(f"t_values must lie in (0, {T_MAX}]")
        if ts.size > 1 and (np.diff(ts) <= 0).any():
            raise ValueError("t_values must be strictly increasing")


def second_difference(f: TestFunction, x: float, h: float, phi_at_x: float,
                      xi: float | None = None, exclusion: float = 0.0) -> float:
    """f(x + h*phi) - 2 f(x) + f(x - h*phi).

    Raises Inadmissible when a stencil point leaves [0,1] or lands
    inside the exclusion tube around xi (absolute radius ``exclusion``,
    widened for the translates to REL_STEP_TUBE * h * phi).
    """
    if h <= 0.0 or phi_at_x < 0.0:
        raise ValueError("h must be positive and phi_at_x non-negative")
    off = h * phi_at_x
    xp, xm = x + off, x - off
    if xp > 1.0 or xm < 0.0:
        raise Inadmissible(f"stencil {xm:.6g}..{xp:.6g} leaves [0,1]")
    if xi is not None:
        tube = max(exclusion, REL_STEP_TUBE * off)
        if abs(x - xi) <= exclusion or abs(xp - xi) <= tube or abs(xm - xi) <= tube:
            raise Inadmissible("stencil hits the exclusion tube")
    return float(f.eval(xp) - 2.0 * f.eval(x) + f.eval(xm))


def _weighted_diff_max(f, params, sw, grid, h):
    """Grid sup of |wbar * second difference| at one step h, or None
    when every grid point is inadmissible."""
    x = grid.points
    off = h * step_weight(sw, x)
    xp = x + off
    xm = x - off
    tube = np.maximum(grid.exclusion_radius, REL_STEP_TUBE * off)
    ok = (
        (xp <= 1.0)
        & (xm >= 0.0)
        & (np.abs(xp - params.xi) > tube)
        & (np.abs(xm - params.xi) > tube)
    )
    if not ok.any():
        return None
    xa = x[ok]
    vals = wbar(params, xa) * np.abs(f.eval(xp[ok]) - 2.0 * f.eval(xa) + f.eval(xm[ok]))
    if np.isnan(vals).any():
        raise ValueError(f"evaluation of {f.name or 'f'} failed in second difference")
    return float(vals.max())


def _ladder(anchor: float, h_steps: int) -> np.ndarray:
    ratio = 0.01 ** (1.0 / (h_steps - 1))
    return anchor * ratio ** np.arange(h_steps)


def weighted_modulus(f: TestFunction, params: WeightParams, sw: StepWeight,
                     t: float, cfg: ModulusConfig) -> float:
    """Grid sup over steps h <= t and abscissae x of
    |wbar(x) (f(x + h phi(x)) - 2 f(x) + f(x - h phi(x)))|.

    The h grid is the union of the geometric ladders of every anchor
    scale <= t (plus t itself), so along cfg.t_values the h grids are
    nested and the result is non-decreasing in t by construction.
    Inadmissible (h, x) pairs are skipped; if every pair is
    inadmissible the sup is undefined and Degenerate is raised.
    """
    if not 0.0 < t <= T_MAX:
        raise ValueError(f"t must lie in (0, {T_MAX}], got {t!r}")
    anchors = [tv for tv in cfg.t_values if tv < t] + [t]
    hs = np.unique(np.concatenate([_ladder(a, cfg.h_steps) for a in anchors]))
    best = None
    for h in hs:
        m = _weighted_diff_max(f, params, sw, cfg.x_grid, h)
        if m is not None:
            best = m if best is None else max(best, m)
    if best is None:
        raise Degenerate(f"no admissible (h, x) pair at t={t!r}")
    return best


def modulus_curve(f: TestFunction, params: WeightParams, sw: StepWeight,
                  cfg: ModulusConfig) -> np.ndarray:
    """weighted_modulus at every anchor in cfg.t_values, sharing ladder
    evaluations across anchors (each h is visited once)."""
    out = np.empty(len(cfg.t_values))
    best = None
    for i, tv in enumerate(cfg.t_values):
        for h in _ladder(tv, cfg.h_steps):
            m = _weighted_diff_max(f, params, sw, cfg.x_grid, h)
            if m is not None:
                best = m if best is None else max(best, m)
        if best is None:
            raise Degenerate(f"no admissible (h, x) pair at t={tv!r}")
        out[i] = best
    return out


def k_functional_upper(f: TestFunction, params: WeightParams, sw: StepWeight,
                       t: float, candidates: Sequence[TestFunction],
                       grid: EvalGrid | None = None) -> float:
    """min over candidates g of sup|wbar (f - g)| + t^2 sup|wbar phi^2 g''|,
    an upper bound for the main-part K-functional (the true infimum over
    all admissible g is not computable).  Norms are grid sups.
    """
    if not candidates:
        raise ValueError("need at least one candidate")
    if grid is None:
        from .weights import refined_grid

        grid = refined_grid(params)
    x = grid.points
    w = wbar(params, x)
    phi2 = step_weight(sw, x) ** 2
    fx = np.asarray(f.eval(x), dtype=float)
    best = np.inf
    for g in candidates:
        if g.d2 is None:
            raise MissingDerivative(f"candidate {g.name or 'g'} lacks d2")
        close = np.max(np.abs(w * (fx - np.asarray(g.eval(x), dtype=float))))
        stiff = np.max(np.abs(w * phi2 * np.asarray(g.d2(x), dtype=float)))
        best = min(best, close + t * t * stiff)
    return float(best)


def steklov_means(f: TestFunction, params: WeightParams, sw: StepWeight,
                  scales: Sequence[float], quad_nodes: int = 129) -> list[TestFunction]:
    """Double-averaging smoothers of f at the given step scales.

    The two-fold average over [-h phi(x)/2, h phi(x)/2]^2 collapses to a
    single integral against the triangular kernel (1-|s|) on [-1,1],
    evaluated by composite trapezoid; evaluation points are clipped to
    [0,1].  Second derivatives come from 5-point stencils whose step
    follows the local smoothing width.
    """
    if quad_nodes < 9 or quad_nodes % 2 == 0:
        raise ValueError("quad_nodes must be odd and >= 9")
    s = np.linspace(-1.0, 1.0, quad_nodes)
    wq = np.full(quad_nodes, 2.0 / (quad_nodes - 1))
    wq[0] *= 0.5
    wq[-1] *= 0.5
    wq = wq * (1.0 - np.abs(s))
    wq /= wq.sum()

    def make(h: float) -> TestFunction:
        def g(x):
            # clamp the argument too: the d2 stencil probes slightly
            # outside [0,1]
            xs = np.clip(np.atleast_1d(np.asarray(x, dtype=float)), 0.0, 1.0)
            y = np.clip(xs[:, None] + (h * step_weight(sw, xs))[:, None] * s[None, :], 0.0, 1.0)
            vals = np.asarray(f.eval(y.ravel()), dtype=float).reshape(y.shape) @ wq
            return float(vals[0]) if np.ndim(x) == 0 else vals

        def g2(x):
            xs = np.atleast_1d(np.asarray(x, dtype=float))
            step = np.maximum(1e-6, h * step_weight(sw, xs) / 16.0)
            acc = -30.0 * g(xs)
            for j, c in ((1, 16.0), (2, -1.0)):
                acc = acc + c * (g(xs + j * step) + g(xs - j * step))
            val = acc / (12.0 * step * step)
            return float(val[0]) if np.ndim(x) == 0 else val

        return TestFunction(
            eval=g, d2=g2, name=f"steklov[{h:.6g}]({f.name or 'f'})", in_w2phi=True
        )

    return [make(float(h)) for h in scales]


def quadrature_bound_ratio(sw: StepWeight, t: float, x: float, panels: int = 256) -> float:
    """Ratio of the double integral of phi^-2 over [-t/2, t/2]^2
    (composite 2-d trapezoid) to t^2 phi^-2(x), for 0 < t < 1/4 and
    t < x < 1-t.  Boundedness of this ratio over a (t, x) sweep is the
    step-weight integrability property the smoothing arguments rest on.
    """
    if not 0.0 < t < 0.25:
        raise ValueError(f"t must lie in (0, 1/4), got {t!r}")
    if not t < x < 1.0 - t:
        raise ValueError(f"x must lie in (t, 1-t), got {x!r}")
    u = np.linspace(-t / 2.0, t / 2.0, panels + 1)
    wu = np.full(panels + 1, t / panels)
    wu[0] *= 0.5
    wu[-1] *= 0.5
    y = x + u[:, None] + u[None, :]
    integral = float(wu @ step_weight(sw, y) ** -2.0 @ wu)
    return integral / (t * t * step_weight(sw, x) ** -2.0)
