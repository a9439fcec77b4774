"""Closed-form evaluations of the band-averaged transfer counters.

The workhorse is the two-parameter integral family

    omega_nu(x, y) = (1/pi) int_0^pi cos(z)^nu exp(y cos z) cos(x sin(z)^2) dz

which collapses the Boltzmann-statistics band integrals exactly:

    nbar_B(t) = exp(beta mu) [exp(-lam t) omega_0(2 g t, 2 beta) - I_0(2 beta)]
    ebar_B(t) = -2 exp(beta mu) [exp(-lam t) omega_1(2 g t, 2 beta) - I_1(2 beta)]

omega is evaluated by the double series

    (1/pi) sum_n (-1)^n x^(2n)/(2n)! sum_m y^(2m+i)/(2m+i)!
                 * B(2n + 1/2, (nu + 2m + 1 + i)/2),     i = nu mod 2

(alternating in n, all-positive in m) with a direct-quadrature fallback once
|x| or y leaves the series-stable window.  Useful identities, verified in the
test suite: omega_nu(0, y) = I_nu(y) for nu in {0, 1}, and
omega_0(x, 0) = cos(x/2) J_0(x/2).

For Fermi-Dirac statistics at low temperature the same integrals admit a
Sommerfeld expansion.  Writing th = arccos(-mu/2) and expanding the
oscillation cos(2 g t sin(k)^2) = cos(g t - g t cos 2k) over harmonics
(argument g t, not 2 g t), the partial-band integrals int_0^th cos(j k) dk =
sin(j th)/j give

  nbar_FD = (1/pi) { exp(-lam t) S_N - th
                     + (pi^2 T^2 / 6) d/de[(exp(-lam t) cos(g_e t) - 1)
                                           / sqrt(4 - e^2)]_{e=mu} }
  S_N = cos(gt) J_0(gt) th + sum_{n>=1} (-1)^n [ cos(gt) J_2n(gt) sin(4n th)/(2n)
        - sin(gt) J_{2n-1}(gt) sin((4n-2) th)/(2n-1) ]

  ebar_FD = (1/pi) { -2 exp(-lam t) S_E + 2 sin(th)
                     + (pi^2 T^2 / 6) d/de[e (exp(-lam t) cos(g_e t) - 1)
                                           / sqrt(4 - e^2)]_{e=mu} }
  S_E = cos(gt) J_0(gt) sin(th) + sum_{n>=1} (-1)^n [ cos(gt) J_2n(gt)
        (sin((4n+1)th)/(4n+1) + sin((4n-1)th)/(4n-1))
        - sin(gt) J_{2n-1}(gt) (sin((4n-1)th)/(4n-1) + sin((4n-3)th)/(4n-3)) ]

with g_e = 2 g (1 - e^2/4), so the bracket derivatives are taken with the
full e-dependence and evaluated at e = mu.  Both expansions vanish
identically at t = 0 and reduce at t = inf (lam > 0) to the damped limits,
whose mu/T derivatives are also provided here in closed form for
equilibrium comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import ReservoirParams
from .special import SpecialFnTable, beta_fn, bessel_i
from .transport import (EquilibriumUndefinedError, OnsagerBlock, QuadratureSpec,
                        TransportPoint, integrate_interval)

import numpy as np

_X_SERIES_MAX = 10.0  # alternating-sum cancellation stays under ~1e-11 here
_Y_SERIES_MAX = 30.0


class SeriesConvergenceError(RuntimeError):
    """Series did not meet tolerance within the term budget."""


@dataclass(frozen=True)
class SeriesResult:
    """A truncated-series value with its own error bookkeeping."""

    value: float
    trunc_error_est: float
    terms_used: int
    converged: bool


def _scalar_damping(t: float, dephasing: float) -> float:
    if t < 0.0:
        raise ValueError("time must be >= 0")
    if math.isinf(t):
        if dephasing <= 0.0:
            raise EquilibriumUndefinedError(
                "t = inf with lam = 0 has no limit; the mode oscillates forever")
        return 0.0
    e = math.exp(-dephasing * t)
    return e if e > 1e-280 else 0.0


def omega_defining_integral(nu: int, x: float, y: float, tol: float = 1e-12) -> SeriesResult:
    """Direct quadrature of the omega integrand (fallback and cross-check)."""
    if nu < 0:
        raise ValueError("nu must be a non-negative integer")
    if y < 0.0:
        raise ValueError("y must be >= 0 (no analytic continuation here)")
    quad = QuadratureSpec(abs_tol=max(tol * 0.1, 1e-14) * max(1.0, math.exp(min(y, 700.0))),
                          rel_tol=1e-13, max_panels=1 << 14,
                          nodes_per_panel=16, base_panels=8)

    def f(z):
        return np.cos(z) ** nu * np.exp(y * np.cos(z)) * np.cos(x * np.sin(z) ** 2)

    val, err = integrate_interval(f, 0.0, math.pi, quad,
                                  min_panels=max(8, int(math.ceil(abs(x)))))
    return SeriesResult(value=float(val) / math.pi, trunc_error_est=err / math.pi,
                        terms_used=0, converged=True)


def omega(nu: int, x: float, y: float, tol: float = 1e-12,
          max_terms: int = 200) -> SeriesResult:
    """omega_nu(x, y) by series inside the stable window, quadrature outside.

    The outer series alternates in n; convergence is declared once two
    successive terms fall below tol/10, and the reported truncation error is
    the standard alternating-tail bound (the first omitted term).
    """
    if not isinstance(nu, (int, np.integer)) or nu < 0:
        raise ValueError("nu must be a non-negative integer")
    if y < 0.0:
        raise ValueError("y must be >= 0 (no analytic continuation here)")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    x = abs(float(x))
    if x > _X_SERIES_MAX or y > _Y_SERIES_MAX:
        return omega_defining_integral(nu, x, y, tol)

    i = nu % 2
    x2 = x * x
    y2 = y * y
    x_pow = 1.0  # x^(2n)/(2n)!
    total = 0.0
    peak = 0.0
    term_abs_prev = math.inf
    for n in range(max_terms):
        if n:
            x_pow *= x2 / ((2 * n - 1) * (2 * n))
        # inner all-positive sum over m
        y_term = y ** i / math.factorial(i)
        inner = 0.0
        m = 0
        while True:
            if m:
                y_term *= y2 / ((2 * m + i - 1) * (2 * m + i))
            contrib = y_term * beta_fn(2 * n + 0.5, 0.5 * (nu + 2 * m + 1 + i))
            inner += contrib
            m += 1
            if contrib < 1e-18 * inner or m > 400:
                break
        term = x_pow * inner / math.pi
        total += -term if n % 2 else term
        peak = max(peak, term)
        if term < tol / 10.0 and term_abs_prev < tol / 10.0:
            # cancellation among the signed terms limits accuracy to
            # roughly eps * (largest term); fold that into the estimate
            est = term + 2.3e-16 * peak * (n + 1)
            return SeriesResult(value=total, trunc_error_est=est,
                                terms_used=n + 1, converged=True)
        term_abs_prev = term
    raise SeriesConvergenceError("omega series needs more than %d terms" % max_terms)


def _check_boltzmann_prefactor(res: ReservoirParams) -> float:
    arg = res.beta * res.mu
    if arg > 690.0:
        raise OverflowError("exp(beta mu) overflows; state far outside dilute regime")
    return math.exp(arg)


def nbar_boltzmann_closed(t: float, res: ReservoirParams, dephasing: float,
                          g: float) -> float:
    """Exact Boltzmann-statistics particle counter (no truncation error)."""
    damping = _scalar_damping(t, dephasing)
    pref = _check_boltzmann_prefactor(res)
    y = 2.0 * res.beta
    osc = damping * omega(0, 2.0 * g * t, y).value if damping > 0.0 else 0.0
    return pref * (osc - bessel_i(0, y))


def ebar_boltzmann_closed(t: float, res: ReservoirParams, dephasing: float,
                          g: float) -> float:
    """Exact Boltzmann-statistics energy counter."""
    damping = _scalar_damping(t, dephasing)
    pref = _check_boltzmann_prefactor(res)
    y = 2.0 * res.beta
    osc = damping * omega(1, 2.0 * g * t, y).value if damping > 0.0 else 0.0
    return -2.0 * pref * (osc - bessel_i(1, y))


# ---------------------------------------------------------------------------
# Sommerfeld expansion for Fermi-Dirac statistics
# ---------------------------------------------------------------------------

_SOMMERFELD_N_CAP = 30  # keeps Bessel orders within the validated range


def _check_sommerfeld_args(res: ReservoirParams, n_max: int):
    if abs(res.mu) >= 2.0:
        raise ValueError("Sommerfeld form needs mu strictly inside the band (-2, 2)")
    if not 1 <= n_max <= _SOMMERFELD_N_CAP:
        raise ValueError("n_max must be in [1, %d]" % _SOMMERFELD_N_CAP)


def _bracket_derivative_n(mu: float, t: float, damping: float, g: float) -> float:
    """d/de [(damping cos(g_e t) - 1)/sqrt(4 - e^2)] at e = mu."""
    root = 4.0 - mu * mu
    if damping > 0.0:
        g_e_t = 2.0 * g * (1.0 - 0.25 * mu * mu) * t
        osc = damping * math.cos(g_e_t)
        d_osc = damping * t * g * mu * math.sin(g_e_t)
    else:
        osc = 0.0
        d_osc = 0.0
    return d_osc / math.sqrt(root) + mu * (osc - 1.0) * root ** -1.5


def _bracket_derivative_e(mu: float, t: float, damping: float, g: float) -> float:
    """d/de [e (damping cos(g_e t) - 1)/sqrt(4 - e^2)] at e = mu."""
    root = 4.0 - mu * mu
    if damping > 0.0:
        osc = damping * math.cos(2.0 * g * (1.0 - 0.25 * mu * mu) * t)
    else:
        osc = 0.0
    return (osc - 1.0) / math.sqrt(root) + mu * _bracket_derivative_n(mu, t, damping, g)


def _alternating_series(terms) -> tuple[float, float, int, bool]:
    """Sum signed terms, stopping once two successive |terms| are tiny."""
    total = 0.0
    below = 0
    last_abs = math.inf
    count = 0
    for tol_tenth, signed in terms:
        total += signed
        count += 1
        a = abs(signed)
        below = below + 1 if (a < tol_tenth and last_abs < tol_tenth) else 0
        last_abs = a
        if below:
            return total, a, count, True
    return total, last_abs, count, False


def nbar_fd_sommerfeld(t: float, res: ReservoirParams, dephasing: float, g: float,
                       n_max: int = 25, tol: float = 1e-12) -> SeriesResult:
    """Low-temperature particle counter for Fermi-Dirac statistics.

    Truncated Bessel series plus the T^2 band-edge-aware correction; exact 0
    at t = 0, damped limit at t = inf (dephasing > 0).  mu must be inside
    the band; accuracy degrades as T or |mu| grow toward the band edge.
    """
    _check_sommerfeld_args(res, n_max)
    damping = _scalar_damping(t, dephasing)
    theta = math.acos(-0.5 * res.mu)
    temp = res.temperature
    series_tail = 0.0
    terms_used = 0
    converged = True
    series = 0.0
    if damping > 0.0:
        gt = g * t
        table = SpecialFnTable(max_order=2 * n_max, x_bessel_j=gt)
        c, s = math.cos(gt), math.sin(gt)

        def gen():
            yield tol / 10.0, c * table.j(0) * theta
            for n in range(1, n_max + 1):
                sign = -1.0 if n % 2 else 1.0
                f_n = (c * table.j(2 * n) * math.sin(4 * n * theta) / (2 * n)
                       - s * table.j(2 * n - 1) * math.sin((4 * n - 2) * theta) / (2 * n - 1))
                yield tol / 10.0, sign * f_n

        series, series_tail, terms_used, converged = _alternating_series(gen())
    value = (damping * series - theta
             + (math.pi ** 2 * temp ** 2 / 6.0)
             * _bracket_derivative_n(res.mu, t, damping, g)) / math.pi
    return SeriesResult(value=value, trunc_error_est=damping * series_tail / math.pi,
                        terms_used=terms_used, converged=converged)


def ebar_fd_sommerfeld(t: float, res: ReservoirParams, dephasing: float, g: float,
                       n_max: int = 25, tol: float = 1e-12) -> SeriesResult:
    """Low-temperature energy counter for Fermi-Dirac statistics."""
    _check_sommerfeld_args(res, n_max)
    damping = _scalar_damping(t, dephasing)
    theta = math.acos(-0.5 * res.mu)
    temp = res.temperature
    series_tail = 0.0
    terms_used = 0
    converged = True
    series = 0.0
    if damping > 0.0:
        gt = g * t
        table = SpecialFnTable(max_order=2 * n_max, x_bessel_j=gt)
        c, s = math.cos(gt), math.sin(gt)

        def pair(j):
            return math.sin(j * theta) / j

        def gen():
            yield tol / 10.0, c * table.j(0) * math.sin(theta)
            for n in range(1, n_max + 1):
                sign = -1.0 if n % 2 else 1.0
                h_n = (c * table.j(2 * n) * (pair(4 * n + 1) + pair(4 * n - 1))
                       - s * table.j(2 * n - 1) * (pair(4 * n - 1) + pair(4 * n - 3)))
                yield tol / 10.0, sign * h_n

        series, series_tail, terms_used, converged = _alternating_series(gen())
    value = (-2.0 * damping * series + 2.0 * math.sin(theta)
             + (math.pi ** 2 * temp ** 2 / 6.0)
             * _bracket_derivative_e(res.mu, t, damping, g)) / math.pi
    return SeriesResult(value=value,
                        trunc_error_est=2.0 * damping * series_tail / math.pi,
                        terms_used=terms_used, converged=converged)


def equilibrium_sommerfeld_onsager(res: ReservoirParams) -> OnsagerBlock:
    """Onsager block of the damped limit from the closed-form derivatives.

    Differentiates the t = inf Sommerfeld counters analytically (kernel
    convention: the explicit mu weight in the heat counter is not
    differentiated), for comparison against the quadrature coefficients.
    """
    mu = res.mu
    temp = res.temperature
    if abs(mu) >= 2.0:
        raise ValueError("Sommerfeld form needs mu strictly inside the band (-2, 2)")
    root = 4.0 - mu * mu
    r12 = root ** -0.5
    r32 = root ** -1.5
    r52 = root ** -2.5
    c2 = math.pi ** 2 * temp ** 2 / 6.0
    dnbar_dmu = -(r12 + c2 * (r32 + 3.0 * mu * mu * r52)) / math.pi
    dnbar_dt = -(math.pi * temp / 3.0) * mu * r32
    debar_dmu = (-mu * r12 - c2 * (3.0 * mu * r32 + 3.0 * mu ** 3 * r52)) / math.pi
    debar_dt = -(math.pi * temp / 3.0) * (r12 + mu * mu * r32)
    point = TransportPoint(temperature=temp, mu=mu, dephasing=math.nan,
                           g=math.nan, t=math.inf, stats="fd_sommerfeld")
    return OnsagerBlock(j_n_mu=0.5 * temp * dnbar_dmu,
                        j_n_t=0.5 * temp ** 2 * dnbar_dt,
                        j_q_mu=0.5 * temp * (debar_dmu - mu * dnbar_dmu),
                        j_q_t=0.5 * temp ** 2 * (debar_dt - mu * dnbar_dt),
                        point=point)
