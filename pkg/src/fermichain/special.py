"""Special functions needed by the closed-form expressions.

Everything here is implemented in-repo against documented accuracy
contracts so the analytic results do not silently depend on an external
library:

    beta_fn(a, b)        Euler beta through log-gamma; relative error < 1e-13
                         for a, b in (0, 50].
    bessel_j(n, x)       integer-order J_n; absolute error < 1e-12 for
                         |x| <= 100, 0 <= n <= 60 (validated range).
    bessel_i(n, y)       modified I_n; relative error < 1e-12 for |y| <= 100,
                         0 <= n <= 60.
    chebyshev_v(n, x)    third-kind Chebyshev polynomial,
                         V_n(cos th) = cos((n + 1/2) th) / cos(th/2), |x| <= 1.

J_n uses the ascending series for small argument and a downward (Miller)
recurrence normalized by J_0 + 2 J_2 + 2 J_4 + ... = 1 otherwise; I_n uses
the all-positive ascending series, which has no cancellation.
"""

from __future__ import annotations

import math

import numpy as np

_J_MAX_ORDER = 60
_J_MAX_ARG = 100.0
_J_SERIES_CUTOFF = 8.0


def beta_fn(a: float, b: float) -> float:
    """Euler beta B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for a, b > 0."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("beta_fn requires positive arguments")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def _bessel_j_series(n: int, x: float) -> float:
    # ascending series; safe from cancellation for |x| < ~8
    half = 0.5 * x
    term = half ** n / math.factorial(n)
    total = term
    for k in range(1, 60):
        term *= -(half * half) / (k * (n + k))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def _bessel_j_all_positive(x: float, n_max: int) -> np.ndarray:
    """J_0..J_n_max at x > 0 by downward recurrence with sum normalization."""
    start = int(max(n_max, math.ceil(x)) + 60)
    if start % 2:
        start += 1
    fp = 0.0  # J_{m+1} surrogate
    fc = 1e-300  # J_m surrogate
    out = np.zeros(n_max + 1)
    norm = 0.0
    for m in range(start, 0, -1):
        fm = (2.0 * m / x) * fc - fp
        fp, fc = fc, fm
        if abs(fc) > 1e250:
            fc *= 1e-250
            fp *= 1e-250
            out *= 1e-250
            norm *= 1e-250
        idx = m - 1
        if idx <= n_max:
            out[idx] = fc
        if idx % 2 == 0:
            norm += 2.0 * fc if idx else fc
    return out / norm


def bessel_j(n: int, x: float) -> float:
    """Bessel function J_n(x) for integer n in [0, 60], |x| <= 100."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError("order must be a non-negative integer")
    if n > _J_MAX_ORDER or abs(x) > _J_MAX_ARG:
        raise ValueError("outside validated range n <= %d, |x| <= %g"
                         % (_J_MAX_ORDER, _J_MAX_ARG))
    sign = -1.0 if (x < 0.0 and n % 2) else 1.0
    x = abs(float(x))
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < _J_SERIES_CUTOFF:
        return sign * _bessel_j_series(n, x)
    return sign * float(_bessel_j_all_positive(x, n)[n])


def bessel_i(n: int, y: float) -> float:
    """Modified Bessel function I_n(y) for integer n in [0, 60], |y| <= 100."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError("order must be a non-negative integer")
    if n > _J_MAX_ORDER or abs(y) > _J_MAX_ARG:
        raise ValueError("outside validated range n <= %d, |y| <= %g"
                         % (_J_MAX_ORDER, _J_MAX_ARG))
    sign = -1.0 if (y < 0.0 and n % 2) else 1.0
    y = abs(float(y))
    half = 0.5 * y
    term = half ** n / math.factorial(n)
    total = term
    for k in range(1, 400):
        term *= (half * half) / (k * (n + k))
        total += term
        if term < 1e-17 * total:
            break
    return sign * total


def chebyshev_v(n: int, x: float) -> float:
    """Third-kind Chebyshev polynomial V_n(x) on [-1, 1].

    V_0 = 1, V_1 = 2x - 1, V_{k+1} = 2x V_k - V_{k-1}; equivalently
    V_n(cos th) = cos((n + 1/2) th) / cos(th / 2).
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError("degree must be a non-negative integer")
    if abs(x) > 1.0 + 1e-12:
        raise ValueError("argument outside [-1, 1]")
    x = min(1.0, max(-1.0, float(x)))
    if n == 0:
        return 1.0
    prev, cur = 1.0, 2.0 * x - 1.0
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


class SpecialFnTable:
    """Cached orders of J, I, V at fixed arguments.

    Build once per (argument, max order) and read repeatedly; the Bessel-J
    column comes from a single downward-recurrence pass, so filling the table
    costs no more than the highest order requested.
    """

    def __init__(self, max_order: int, x_bessel_j: float | None = None,
                 y_bessel_i: float | None = None, x_chebyshev: float | None = None):
        if max_order < 0:
            raise ValueError("max_order must be >= 0")
        self.max_order = int(max_order)
        self._j = self._i = self._v = None
        if x_bessel_j is not None:
            if abs(x_bessel_j) > _J_MAX_ARG or max_order > _J_MAX_ORDER:
                raise ValueError("outside validated Bessel range")
            xa = abs(float(x_bessel_j))
            if xa == 0.0:
                col = np.zeros(max_order + 1)
                col[0] = 1.0
            elif xa < _J_SERIES_CUTOFF:
                col = np.array([_bessel_j_series(m, xa) for m in range(max_order + 1)])
            else:
                col = _bessel_j_all_positive(xa, max_order)
            if x_bessel_j < 0.0:
                col = col * np.where(np.arange(max_order + 1) % 2, -1.0, 1.0)
            self._j = col
        if y_bessel_i is not None:
            self._i = np.array([bessel_i(m, y_bessel_i) for m in range(max_order + 1)])
        if x_chebyshev is not None:
            x = float(x_chebyshev)
            if abs(x) > 1.0 + 1e-12:
                raise ValueError("Chebyshev argument outside [-1, 1]")
            x = min(1.0, max(-1.0, x))
            col = np.empty(max_order + 1)
            col[0] = 1.0
            if max_order >= 1:
                col[1] = 2.0 * x - 1.0
            for m in range(2, max_order + 1):
                col[m] = 2.0 * x * col[m - 1] - col[m - 2]
            self._v = col

    def _read(self, table, n: int) -> float:
        if table is None:
            raise ValueError("this table was not built for that function")
        if not 0 <= n <= self.max_order:
            raise ValueError("order outside table range")
        return float(table[n])

    def j(self, n: int) -> float:
        return self._read(self._j, n)

    def i(self, n: int) -> float:
        return self._read(self._i, n)

    def v(self, n: int) -> float:
        return self._read(self._v, n)
