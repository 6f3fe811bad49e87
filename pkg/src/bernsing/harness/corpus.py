"""Built-in test functions keyed by name.

Every entry is vectorised (accepts scalars and ndarrays) and carries
the metadata the checks need: exact derivatives where they exist, the
nominal smoothness exponent where one is known, and whether the
weighted second-derivative norm is finite.
"""
from __future__ import annotations

import numpy as np

from ..blending import TestFunction
from ..weights import WeightParams

__all__ = ["CORPUS_NAMES", "corpus"]

CORPUS_NAMES = ("affine", "quadratic", "inner-cusp", "inner-root", "smooth-bump")

_AFFINE_A = 0.75
_AFFINE_B = 0.2

_BUMP_C = 0.35
_BUMP_S = 0.12


def _affine() -> TestFunction:
    return TestFunction(
        eval=lambda t: _AFFINE_A * np.asarray(t, float) + _AFFINE_B,
        d1=lambda t: np.full_like(np.asarray(t, float), _AFFINE_A),
        d2=lambda t: np.zeros_like(np.asarray(t, float)),
        name="affine",
        in_w2phi=True,
    )


def _quadratic() -> TestFunction:
    return TestFunction(
        eval=lambda t: np.asarray(t, float) ** 2,
        d1=lambda t: 2.0 * np.asarray(t, float),
        d2=lambda t: np.full_like(np.asarray(t, float), 2.0),
        name="quadratic",
        in_w2phi=True,
    )


def _smooth_bump() -> TestFunction:
    c, s = _BUMP_C, _BUMP_S

    def f(t):
        u = (np.asarray(t, float) - c) / s
        return np.exp(-u * u)

    def f1(t):
        u = (np.asarray(t, float) - c) / s
        return np.exp(-u * u) * (-2.0 * u / s)

    def f2(t):
        u = (np.asarray(t, float) - c) / s
        return np.exp(-u * u) * (4.0 * u * u - 2.0) / (s * s)

    return TestFunction(eval=f, d1=f1, d2=f2, name="smooth-bump", in_w2phi=True)


def _inner_root(params: WeightParams) -> TestFunction:
    xi, a = params.xi, params.alpha
    e = -a / 2.0

    def f(t):
        return np.abs(np.asarray(t, float) - xi) ** e

    def f1(t):
        d = np.asarray(t, float) - xi
        return e * np.sign(d) * np.abs(d) ** (e - 1.0)

    def f2(t):
        d = np.asarray(t, float) - xi
        return e * (e - 1.0) * np.abs(d) ** (e - 2.0)

    return TestFunction(
        eval=f,
        d1=f1,
        d2=f2,
        name="inner-root",
        alpha0=a / 2.0 if a / 2.0 < 2.0 else None,
    )


def _inner_cusp(params: WeightParams, alpha0: float) -> TestFunction:
    """Odd cusp sign(x-xi) |x-xi|^(alpha0-alpha): the weighted value
    decays like |x-xi|^alpha0 at the singularity, and alpha0 is the
    decay exponent of its weighted modulus.  The sign factor keeps the
    second difference alive when alpha0 equals the weight exponent
    (a plain power would collapse to a constant there)."""
    if not 0.0 < alpha0 < 2.0:
        raise ValueError(f"inner-cusp needs alpha0 in (0,2), got {alpha0!r}")
    xi = params.xi
    s = alpha0 - params.alpha

    if s == 0.0:

        def f(t):
            return np.sign(np.asarray(t, float) - xi)

        def f1(t):
            return np.zeros_like(np.asarray(t, float))

        f2 = f1
    else:

        def f(t):
            d = np.asarray(t, float) - xi
            return np.sign(d) * np.abs(d) ** s

        def f1(t):
            d = np.asarray(t, float) - xi
            return s * np.abs(d) ** (s - 1.0)

        def f2(t):
            d = np.asarray(t, float) - xi
            return s * (s - 1.0) * np.sign(d) * np.abs(d) ** (s - 2.0)

    return TestFunction(eval=f, d1=f1, d2=f2, name=f"inner-cusp[{alpha0:g}]", alpha0=alpha0)


def corpus(name: str, params: WeightParams, alpha0: float | None = None) -> TestFunction:
    """Look up a corpus function by name.

    ``alpha0`` selects the nominal exponent of ``inner-cusp`` (default
    1.0) and is rejected for the other names, whose exponent is either
    fixed by construction or unknown.
    """
    if name not in CORPUS_NAMES:
        raise ValueError(f"unknown corpus function {name!r}; choose from {CORPUS_NAMES}")
    if name == "inner-cusp":
        return _inner_cusp(params, 1.0 if alpha0 is None else alpha0)
    if alpha0 is not None:
        raise ValueError(f"alpha0 is only configurable for 'inner-cusp', not {name!r}")
    if name == "affine":
        return _affine()
    if name == "quadratic":
        return _quadratic()
    if name == "smooth-bump":
        return _smooth_bump()
    return _inner_root(params)
