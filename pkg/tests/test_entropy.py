import math

import numpy as np
import pytest

from fermichain import (
    EquilibriumModePrep,
    ReservoirParams,
    binary_entropy,
    density_matrix,
    entropy_a_exact,
    entropy_b_exact,
    entropy_coeffs,
    entropy_production,
    entropy_production_integral,
    entropy_sum,
    entropy_sum_rate,
    joint_density,
    joint_entropy,
    joint_entropy_exact,
    joint_spectrum,
    mutual_information,
    mutual_information_exact,
    mutual_information_rate,
    occupation_fd,
    von_neumann,
)
from fermichain.lattice import ModeSpec


def test_von_neumann_pure_and_mixed():
    assert von_neumann(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann(np.diag([0.5, 0.5])) == pytest.approx(math.log(2.0), rel=1e-14)


def test_von_neumann_initial_product_saturates_subadditivity():
    res_a = ReservoirParams(0.5, 0.3)
    res_b = ReservoirParams(0.5, -0.3)
    m = ModeSpec(momentum=math.pi / 2, energy=0.0, coupling=1.0, dephasing=0.1)
    rho = density_matrix(m, res_a, res_b, 0.0)
    na = occupation_fd(0.0, res_a)
    nb = occupation_fd(0.0, res_b)
    want = binary_entropy(na) + binary_entropy(nb)
    assert von_neumann(rho) == pytest.approx(want, rel=1e-12)


def test_von_neumann_rejects_bad_states():
    with pytest.raises(ValueError):
        von_neumann(np.array([[0.5, 0.3], [0.1, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        von_neumann(np.diag([0.6, 0.6]))  # trace 1.2
    with pytest.raises(ValueError):
        von_neumann(np.array([[1.2, 0.0], [0.0, -0.2]]))  # negative weight


def test_prep_validation():
    with pytest.raises(ValueError):
        EquilibriumModePrep(n_eq=0.0, delta_n=0.0, coupling=1.0)
    with pytest.raises(ValueError):
        EquilibriumModePrep(n_eq=1.0, delta_n=0.0, coupling=1.0)
    with pytest.raises(ValueError):
        EquilibriumModePrep(n_eq=0.05, delta_n=0.2, coupling=1.0)  # n - dn/2 < 0
    p = EquilibriumModePrep(n_eq=0.3, delta_n=0.1, coupling=1.0, dephasing=0.2)
    assert p.occupation_a == pytest.approx(0.35)
    assert p.occupation_b == pytest.approx(0.25)


def test_coeffs_symmetric_filling_kills_linear_term():
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    for t in (0.0, 0.9, 4.0):
        assert entropy_coeffs(p, t).s1 == 0.0


def test_coeffs_damped_limit():
    p = EquilibriumModePrep(n_eq=0.2, delta_n=0.1, coupling=1.0, dephasing=0.5)
    c = entropy_coeffs(p, 80.0)
    assert abs(c.s1) < 1e-16 and abs(c.s2) < 1e-16
    assert c.entropy_a == pytest.approx(c.s0)
    assert c.entropy_b == pytest.approx(c.s0)
    assert c.s0 == pytest.approx(binary_entropy(0.2), rel=1e-14)


def test_expansion_residual_is_third_order():
    # |exact - expansion| / dn^3 stays bounded as dn shrequired
    ratios = []
    for dn in (0.1, 0.05, 0.025):
        p = EquilibriumModePrep(n_eq=0.1, delta_n=dn, coupling=1.0, dephasing=0.2)
        exact = entropy_a_exact(p, 1.3)
        approx = entropy_coeffs(p, 1.3).entropy_a
        ratios.append(abs(exact - approx) / dn ** 3)
    assert max(ratios) / min(ratios) < 3.0


def test_mutual_information_trivials():
    p = EquilibriumModePrep(n_eq=0.3, delta_n=0.08, coupling=1.0, dephasing=0.0)
    assert mutual_information(p, 0.0) == 0.0
    # sin = 1 extremum of the envelope
    env_max = p.delta_n ** 2 / (4.0 * p.n_eq * (1.0 - p.n_eq))
    assert mutual_information(p, math.pi / 4.0) == pytest.approx(env_max, rel=1e-12)


def test_mutual_information_matches_exact_to_third_order():
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    closed = mutual_information(p, 0.7)
    exact = mutual_information_exact(p, 0.7)
    assert abs(closed - exact) < p.delta_n ** 3


def test_production_trivial_zeros():
    no_noise = EquilibriumModePrep(n_eq=0.4, delta_n=0.1, coupling=1.0, dephasing=0.0)
    assert entropy_production(no_noise, 2.0) == 0.0
    no_bias = EquilibriumModePrep(n_eq=0.4, delta_n=0.0, coupling=1.0, dephasing=0.3)
    assert entropy_production(no_bias, 2.0) == 0.0
    assert entropy_production_integral(no_noise) == 0.0


def test_production_integral_equals_lifetime_quadrature():
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    t = np.linspace(0.0, 400.0, 2_000_001)
    total = np.trapezoid(entropy_production(p, t), t)
    assert entropy_production_integral(p) == pytest.approx(total, abs=1e-10)
    # and it equals the mutual-information envelope maximum
    env_max = p.delta_n ** 2 / (4.0 * p.n_eq * (1.0 - p.n_eq))
    assert entropy_production_integral(p) == pytest.approx(env_max, rel=1e-14)


def test_production_nonnegative():
    p = EquilibriumModePrep(n_eq=0.35, delta_n=0.12, coupling=1.3, dephasing=0.4)
    assert np.all(entropy_production(p, np.linspace(0.0, 30.0, 301)) >= 0.0)


def test_joint_entropy_rate_identity_exact_forms():
    # Pi = d(S_A + S_B)/dt - dI/dt holds exactly in the expansion
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    for t in (0.0, 0.4, 1.0, 3.7):
        lhs = entropy_production(p, t)
        rhs = entropy_sum_rate(p, t) - mutual_information_rate(p, t)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_joint_entropy_rate_matches_finite_difference():
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    h = 1e-5
    fd = (joint_entropy(p, 1.0 + h) - joint_entropy(p, 1.0 - h)) / (2.0 * h)
    assert entropy_production(p, 1.0) == pytest.approx(fd, abs=1e-7)


def test_joint_entropy_closed_system_is_constant():
    p = EquilibriumModePrep(n_eq=0.3, delta_n=0.1, coupling=1.0, dephasing=0.0)
    ts = np.linspace(0.0, 20.0, 101)
    vals = joint_entropy(p, ts)
    assert np.max(np.abs(vals - vals[0])) < 1e-14
    exact = joint_entropy_exact(p, ts)
    assert np.max(np.abs(exact - exact[0])) < 1e-10


def test_joint_entropy_second_law_with_noise():
    p = EquilibriumModePrep(n_eq=0.3, delta_n=0.1, coupling=1.0, dephasing=0.25)
    exact = joint_entropy_exact(p, np.linspace(0.0, 20.0, 401))
    assert np.all(np.diff(exact) >= -1e-10)


def test_joint_entropy_damped_limit():
    p = EquilibriumModePrep(n_eq=0.3, delta_n=0.1, coupling=1.0, dephasing=0.5)
    assert joint_entropy(p, 200.0) == pytest.approx(2.0 * binary_entropy(0.3), rel=1e-12)


def test_joint_spectrum_matches_dense_eigensolver():
    p = EquilibriumModePrep(n_eq=0.35, delta_n=0.14, coupling=1.2, dephasing=0.15)
    for t in (0.0, 0.8, 2.9):
        rho = joint_density(p, t)
        dense = np.sort(np.linalg.eigvalsh(rho))
        closed = np.sort(joint_spectrum(p, t))
        np.testing.assert_allclose(closed, dense, atol=1e-13)


def test_joint_entropy_exact_consistency_with_von_neumann():
    p = EquilibriumModePrep(n_eq=0.5, delta_n=0.1, coupling=1.0, dephasing=0.2)
    assert joint_entropy_exact(p, 0.7) == pytest.approx(
        von_neumann(joint_density(p, 0.7)), abs=1e-12)


def test_subadditivity_exact():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n_eq = rng.uniform(0.05, 0.95)
        dn = rng.uniform(0.0, 2.0 * min(n_eq, 1.0 - n_eq) * 0.9)
        p = EquilibriumModePrep(n_eq=n_eq, delta_n=dn,
                                coupling=rng.uniform(0.0, 2.0),
                                dephasing=rng.uniform(0.0, 1.0))
        t = rng.uniform(0.0, 10.0)
        gap = entropy_a_exact(p, t) + entropy_b_exact(p, t) - joint_entropy_exact(p, t)
        assert gap >= -1e-12
