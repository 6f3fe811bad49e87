"""Numerically stable Bernstein basis evaluation and moment sums.

All basis values are computed in log space: a cumulative log-factorial
table supplies the log-binomial, the exponent is assembled in extended
precision, and only the final (small-magnitude) exponent is handed to
``exp`` in double precision.  Direct binomial products would overflow
near n = 1030; the exponent cancellation (log-binomial against
k*ln x + (n-k)*ln(1-x), both of size ~n) would cost ~1e-12 of absolute
accuracy if assembled in float64, which is why the table and assembly
use ``np.longdouble``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BasisRow",
    "basis_value",
    "basis_row",
    "bernstein_apply",
    "central_moment_sum",
    "inverse_moment_sum",
]

_LD = np.longdouble

# ln(i!) for i = 0..len-1, accumulated with Neumaier compensation so the
# per-entry absolute error stays at the longdouble rounding level instead
# of growing with the table length.
_ln_fact = np.zeros(2, dtype=_LD)

# cached log-binomial rows: n -> array of ln C(n, k), k = 0..n
_binom_rows: dict[int, np.ndarray] = {}


def _extend_ln_fact(n: int) -> None:
    global _ln_fact
    top = _ln_fact.size - 1
    if n <= top:
        return
    size = max(n, 2 * top)
    logs = np.log(np.arange(top + 1, size + 1, dtype=_LD))
    out = np.empty(size + 1, dtype=_LD)
    out[: top + 1] = _ln_fact
    s = out[top]
    c = _LD(0.0)
    for i in range(logs.size):
        t = logs[i]
        tot = s + t
        if abs(s) >= abs(t):
            c += (s - tot) + t
        else:
            c += (t - tot) + s
        s = tot
        out[top + 1 + i] = s + c
    _ln_fact = out


def _binom_log_row(n: int) -> np.ndarray:
    row = _binom_rows.get(n)
    if row is None:
        _extend_ln_fact(n)
        f = _ln_fact[: n + 1]
        row = _ln_fact[n] - f - f[::-1]
        row.flags.writeable = False
        _binom_rows[n] = row
    return row


def _check_degree(n: int) -> None:
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")


def _check_x(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"abscissa must lie in [0,1], got {x!r}")


def _row_weights(n: int, x: float) -> np.ndarray:
    """All n+1 basis values at x, float64, with the 0**0 = 1 endpoint rule."""
    if x == 0.0 or x == 1.0:
        w = np.zeros(n + 1)
        w[-1 if x == 1.0 else 0] = 1.0
        return w
    xl = _LD(x)
    lx = np.log(xl)
    l1x = np.log1p(-xl)
    k = np.arange(n + 1, dtype=_LD)
    ex = (_binom_log_row(n) + k * lx) + (n - k) * l1x
    return np.exp(ex.astype(np.float64))


def _window_weights(n: int, klo: int, khi: int, x: float) -> np.ndarray:
    """Basis values for the index slice klo..khi only (asymptotically
    cheaper than a full row when the window is O(sqrt(n)) wide)."""
    if x == 0.0 or x == 1.0:
        w = np.zeros(khi - klo + 1)
        hot = 0 if x == 0.0 else n
        if klo <= hot <= khi:
            w[hot - klo] = 1.0
        return w
    xl = _LD(x)
    lx = np.log(xl)
    l1x = np.log1p(-xl)
    k = np.arange(klo, khi + 1, dtype=_LD)
    ex = (_binom_log_row(n)[klo : khi + 1] + k * lx) + (n - k) * l1x
    return np.exp(ex.astype(np.float64))


@dataclass(frozen=True, eq=False)
class BasisRow:
    """One full row of the degree-n Bernstein basis at abscissa x."""

    n: int
    x: float
    weights: np.ndarray


def basis_value(n: int, k: int, x: float) -> float:
    """p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k), evaluated in log space."""
    _check_degree(n)
    if not 0 <= k <= n:
        raise ValueError(f"index k={k} outside 0..{n}")
    _check_x(x)
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if x == 1.0:
        return 1.0 if k == n else 0.0
    xl = _LD(x)
    kl = _LD(k)
    ex = (_binom_log_row(n)[k] + kl * np.log(xl)) + (n - kl) * np.log1p(-xl)
    return float(np.exp(np.float64(ex)))


def basis_row(n: int, x: float) -> BasisRow:
    """All basis values at x as a BasisRow (non-negative, sums to 1)."""
    _check_degree(n)
    if n < 1:
        raise ValueError("basis_row needs n >= 1")
    _check_x(x)
    w = _row_weights(n, x)
    w.flags.writeable = False
    return BasisRow(n=n, x=x, weights=w)


def _apply_many(samples: np.ndarray, xs: np.ndarray) -> np.ndarray:
    n = samples.size - 1
    out = np.empty(xs.size)
    at0 = xs == 0.0
    at1 = xs == 1.0
    out[at0] = samples[0]
    out[at1] = samples[-1]
    interior = ~(at0 | at1)
    idx = np.flatnonzero(interior)
    if idx.size == 0:
        return out
    lrow = _binom_log_row(n)
    k = np.arange(n + 1, dtype=_LD)
    nk = _LD(n) - k
    chunk = max(1, 1_000_000 // (n + 1))
    for a in range(0, idx.size, chunk):
        sel = idx[a : a + chunk]
        xl = xs[sel].astype(_LD)
        lx = np.log(xl)
        l1x = np.log1p(-xl)
        ex = (lrow[None, :] + lx[:, None] * k[None, :]) + l1x[:, None] * nk[None, :]
        out[sel] = np.exp(ex.astype(np.float64)) @ samples
    return out


def bernstein_apply(samples, x):
    """Sum_k samples[k] * p_{n,k}(x) with n = len(samples) - 1.

    x may be a scalar or an ndarray; the array path evaluates the basis
    in blocks so rows are never materialised for the whole grid at once.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("samples must be a non-empty 1-d vector")
    if np.ndim(x) == 0:
        _check_x(float(x))
        return float(np.dot(_row_weights(s.size - 1, float(x)), s))
    xs = np.asarray(x, dtype=float)
    if xs.size and (xs.min() < 0.0 or xs.max() > 1.0):
        raise ValueError("abscissae must lie in [0,1]")
    return _apply_many(s, xs.ravel()).reshape(xs.shape)


def central_moment_sum(n: int, gamma: float, x: float) -> float:
    """Sum_k p_{n,k}(x) |k - n x|^gamma."""
    _check_degree(n)
    if n < 1:
        raise ValueError("central_moment_sum needs n >= 1")
    _check_x(x)
    if gamma < 0 and (x == 0.0 or x == 1.0):
        raise ValueError("negative gamma is undefined at x in {0,1}")
    w = _row_weights(n, x)
    d = np.abs(np.arange(n + 1, dtype=float) - n * x)
    with np.errstate(divide="ignore"):
        powers = d**gamma
    return float(np.dot(w, powers))


def inverse_moment_sum(n: int, u: float, v: float, x: float) -> float:
    """Sum over interior indices k = 1..n-1 of (k/n)^-u (1-k/n)^-v p_{n,k}(x)."""
    _check_degree(n)
    if n < 2:
        raise ValueError("inverse_moment_sum needs n >= 2")
    if not 0.0 < x < 1.0:
        raise ValueError(f"abscissa must lie in (0,1), got {x!r}")
    if u < 0 or v < 0:
        raise ValueError("exponents u, v must be non-negative")
    w = _row_weights(n, x)[1:n]
    t = np.arange(1, n, dtype=float) / n
    return float(np.dot(w, t**-u * (1.0 - t) ** -v))
