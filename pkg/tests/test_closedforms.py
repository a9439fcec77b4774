import math

import numpy as np
import pytest

from fermichain import (
    ReservoirParams,
    SeriesConvergenceError,
    bessel_i,
    bessel_j,
    ebar,
    ebar_boltzmann_closed,
    ebar_fd_sommerfeld,
    equilibrium_sommerfeld_onsager,
    nbar,
    nbar_boltzmann_closed,
    nbar_fd_sommerfeld,
    omega,
    omega_defining_integral,
)
from fermichain.transport import STATS_BOLTZMANN


def test_omega_at_origin():
    assert omega(0, 0.0, 0.0).value == pytest.approx(1.0, abs=1e-14)


def test_omega_reduces_to_bessel_i():
    for nu in (0, 1):
        for y in (0.5, 2.0, 5.0):
            got = omega(nu, 0.0, y)
            assert got.value == pytest.approx(bessel_i(nu, y), abs=1e-10)
            assert got.converged


def test_omega_y0_product_form():
    for x in (1.0, 4.0, 10.0):
        assert omega(0, x, 0.0).value == pytest.approx(
            math.cos(0.5 * x) * bessel_j(0, 0.5 * x), abs=1e-10)


def test_omega_odd_order_vanishes_at_y0():
    # integrand odd about z = pi/2 for nu = 1, y = 0
    assert abs(omega(1, 3.0, 0.0).value) < 1e-12


def test_omega_frozen_reference_values():
    # 30-digit quadrature of the defining integral
    assert omega(0, 3.0, 1.5).value == pytest.approx(0.435139747711584576, abs=1e-12)
    assert omega(1, 5.0, 2.0).value == pytest.approx(0.676375204515787951, abs=1e-12)


def test_omega_quadrature_fallback_region():
    # |x| beyond the series window switches to the defining integral
    assert omega(0, 15.0, 3.0).value == pytest.approx(1.08279435381381146, abs=1e-10)
    assert omega(1, 25.0, 0.5).value == pytest.approx(0.0411156671711922582, abs=1e-10)


def test_omega_matches_defining_integral_on_grid():
    # the 1e-10 floor is meaningful for O(1) values; at y = 20 the value is
    # ~4e7 so both evaluations carry a few-ulp spread on top of their own
    # error estimates
    for nu in (0, 1):
        for x in (0.0, 2.0, 7.0, 12.0, 20.0):
            for y in (0.0, 1.0, 6.0, 20.0):
                s = omega(nu, x, y)
                q = omega_defining_integral(nu, x, y)
                tol = max(1e-10, s.trunc_error_est + q.trunc_error_est,
                          16 * np.finfo(float).eps * abs(q.value))
                assert abs(s.value - q.value) <= tol, (nu, x, y)


def test_omega_converged_means_within_tolerance():
    s = omega(0, 4.0, 3.0, tol=1e-12)
    assert s.converged
    assert s.trunc_error_est <= 1e-12
    assert s.terms_used > 0


def test_omega_budget_exhaustion_raises():
    with pytest.raises(SeriesConvergenceError):
        omega(0, 9.5, 25.0, tol=1e-15, max_terms=3)


def test_boltzmann_closed_t0_and_damped_limit():
    res = ReservoirParams(temperature=0.1, mu=-3.0)
    assert nbar_boltzmann_closed(0.0, res, 0.35, 1.0) == pytest.approx(0.0, abs=1e-14)
    assert ebar_boltzmann_closed(0.0, res, 0.35, 1.0) == pytest.approx(0.0, abs=1e-14)
    beta = res.beta
    limit = -math.exp(beta * res.mu) * bessel_i(0, 2.0 * beta)
    assert nbar_boltzmann_closed(math.inf, res, 0.35, 1.0) == pytest.approx(limit, rel=1e-12)


def test_boltzmann_closed_equals_quadrature():
    # exact identity between the omega form and the band integral
    res = ReservoirParams(temperature=0.1, mu=-3.0)
    for t in (0.5, 2.0, 8.0):
        n_closed = nbar_boltzmann_closed(t, res, 0.35, 1.0)
        n_quad = nbar(t, res, 0.35, 1.0, stats=STATS_BOLTZMANN)
        assert n_closed == pytest.approx(n_quad, abs=1e-8)
        e_closed = ebar_boltzmann_closed(t, res, 0.35, 1.0)
        e_quad = ebar(t, res, 0.35, 1.0, stats=STATS_BOLTZMANN)
        assert e_closed == pytest.approx(e_quad, abs=1e-8)


def test_boltzmann_ebar_high_temperature_form():
    # beta -> 0 at mu = 0: value reduces to -2 e^{beta mu} E omega_1(2gt, 2beta),
    # which collapses toward 0 with the odd-order omega
    res = ReservoirParams(temperature=1e6, mu=0.0)
    lam, g, t = 0.35, 1.0, 1.5
    got = ebar_boltzmann_closed(t, res, lam, g)
    beta = res.beta
    z = np.linspace(0.0, math.pi, 200_001)
    om1 = np.trapezoid(np.cos(z) * np.exp(2.0 * beta * np.cos(z))
                       * np.cos(2.0 * g * t * np.sin(z) ** 2), z) / math.pi
    want = -2.0 * (math.exp(-lam * t) * om1 - bessel_i(1, 2.0 * beta))
    assert got == pytest.approx(want, abs=1e-12)
    assert abs(got) < 1e-5  # O(beta) overall


def test_boltzmann_prefactor_overflow_guard():
    res = ReservoirParams(temperature=0.001, mu=1.0)
    with pytest.raises(OverflowError):
        nbar_boltzmann_closed(1.0, res, 0.35, 1.0)


def test_sommerfeld_zero_at_t0():
    res = ReservoirParams(temperature=0.1, mu=0.7)
    assert nbar_fd_sommerfeld(0.0, res, 0.35, 1.0).value == pytest.approx(0.0, abs=1e-12)
    assert ebar_fd_sommerfeld(0.0, res, 0.35, 1.0).value == pytest.approx(0.0, abs=1e-12)


def test_sommerfeld_tracks_quadrature():
    res = ReservoirParams(temperature=0.1, mu=0.0)
    n_series = nbar_fd_sommerfeld(2.0, res, 0.35, 1.0).value
    n_quad = nbar(2.0, res, 0.35, 1.0)
    assert n_series == pytest.approx(n_quad, rel=1e-2)
    e_series = ebar_fd_sommerfeld(2.0, res, 0.35, 1.0).value
    e_quad = ebar(2.0, res, 0.35, 1.0)
    assert e_series == pytest.approx(e_quad, rel=1e-2)


def test_sommerfeld_error_grows_with_temperature():
    def rel_gap(temp, mu, t=2.0):
        res = ReservoirParams(temperature=temp, mu=mu)
        q = nbar(t, res, 0.35, 1.0)
        s = nbar_fd_sommerfeld(t, res, 0.35, 1.0).value
        return abs(s - q) / max(abs(q), 1e-30)

    for mu in (-1.5, 1.5):
        assert rel_gap(0.25, mu) > rel_gap(0.1, mu)


def test_sommerfeld_exact_for_particle_counter_at_band_center():
    # at mu = 0 the particle counter's T-dependence cancels identically
    # (odd integrand), so series and quadrature agree to machine precision
    for temp in (0.4, 0.1):
        res = ReservoirParams(temperature=temp, mu=0.0)
        q = nbar(2.0, res, 0.35, 1.0)
        s = nbar_fd_sommerfeld(2.0, res, 0.35, 1.0).value
        assert abs(s - q) / abs(q) < 1e-12


def test_sommerfeld_converges_as_t_drops():
    def gaps(fn_series, fn_quad, mu):
        out = []
        for temp in (0.4, 0.2, 0.1, 0.05):
            res = ReservoirParams(temperature=temp, mu=mu)
            q = fn_quad(2.0, res, 0.35, 1.0)
            s = fn_series(2.0, res, 0.35, 1.0).value
            out.append(abs(s - q) / abs(q))
        return out

    for seq in (gaps(ebar_fd_sommerfeld, ebar, 0.0),
                gaps(nbar_fd_sommerfeld, nbar, 0.6)):
        assert all(a > b for a, b in zip(seq, seq[1:])), seq


def test_sommerfeld_damped_limit_matches_quadrature():
    # lam t >> 1 leaves the t-independent part plus the T^2 correction
    res = ReservoirParams(temperature=0.1, mu=0.7)
    e_series = ebar_fd_sommerfeld(math.inf, res, 0.5, 1.0).value
    e_quad = ebar(math.inf, res, 0.5, 1.0)
    assert e_series == pytest.approx(e_quad, rel=2e-3)
    n_series = nbar_fd_sommerfeld(math.inf, res, 0.5, 1.0).value
    n_quad = nbar(math.inf, res, 0.5, 1.0)
    assert n_series == pytest.approx(n_quad, rel=2e-3)


def test_sommerfeld_domain_guard():
    res = ReservoirParams(temperature=0.1, mu=2.0)
    with pytest.raises(ValueError):
        nbar_fd_sommerfeld(1.0, res, 0.35, 1.0)
    with pytest.raises(ValueError):
        ebar_fd_sommerfeld(1.0, ReservoirParams(0.1, -2.5), 0.35, 1.0)


def test_sommerfeld_series_bookkeeping():
    s = nbar_fd_sommerfeld(3.0, ReservoirParams(0.1, 0.4), 0.35, 1.0, tol=1e-12)
    assert s.converged
    assert s.terms_used >= 1
    assert s.trunc_error_est >= 0.0


def test_equilibrium_block_reciprocity_and_parity():
    res = ReservoirParams(temperature=0.1, mu=0.9)
    blk = equilibrium_sommerfeld_onsager(res)
    assert blk.j_n_t == pytest.approx(blk.j_q_mu, rel=1e-13)
    mirror = equilibrium_sommerfeld_onsager(ReservoirParams(0.1, -0.9))
    assert blk.j_n_mu == pytest.approx(mirror.j_n_mu, rel=1e-13)
    assert blk.j_q_t == pytest.approx(mirror.j_q_t, rel=1e-13)
    assert blk.j_n_t == pytest.approx(-mirror.j_n_t, rel=1e-13)


def test_equilibrium_block_tracks_damped_quadrature():
    from fermichain import onsager
    res = ReservoirParams(temperature=0.1, mu=0.3)
    closed = equilibrium_sommerfeld_onsager(res)
    quad = onsager(math.inf, res, 0.5, 1.0)
    assert closed.j_n_mu == pytest.approx(quad.j_n_mu, rel=5e-3)
    # j_q_t leads at order T^3, so its truncation error is T^2 relative (~2%)
    assert closed.j_q_t == pytest.approx(quad.j_q_t, rel=5e-2)
