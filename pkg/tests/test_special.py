import math

import numpy as np
import pytest

from fermichain import SpecialFnTable, bessel_i, bessel_j, beta_fn, chebyshev_v

# reference values computed with mpmath at 30 significant digits
_J_REF = {
    (0, 0.5): 0.938469807240812904,
    (1, 2.0): 0.576724807756873387,
    (2, 7.9): -0.138873389164885623,
    (5, 8.1): 0.163221510227914989,
    (10, 3.0): 1.29283516457158838e-5,
    (25, 30.0): 0.0842927406430317292,
    (60, 45.0): 2.03287581932728253e-5,
    (60, 100.0): 0.00106315630422770308,
    (0, 100.0): 0.0199858503042231224,
    (7, 11.5): -0.084624465349975154,
    (3, -6.2): -0.054283277122166305,
    (40, 12.0): 6.74488214846900612e-18,
}
_I_REF = {
    (0, 2.0): 2.27958530233606727,
    (1, 0.5): 0.257894305390896316,
    (3, 4.2): 4.21195220660107582,
    (6, 10.0): 449.302251356231638,
    (2, 25.0): 5321931396.07601421,
    (0, 30.0): 781672297823.97749,
}


def test_beta_trivial():
    assert beta_fn(1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)


def test_beta_half_integer():
    # B(2.5, 3.5) = 3 pi / 256
    assert beta_fn(2.5, 3.5) == pytest.approx(3.0 * math.pi / 256.0, rel=1e-13)


def test_beta_symmetry_and_recurrence():
    assert beta_fn(3.2, 1.7) == pytest.approx(beta_fn(1.7, 3.2), rel=1e-14)
    # B(a+1, b) = B(a, b) * a / (a + b)
    a, b = 2.3, 4.1
    assert beta_fn(a + 1.0, b) == pytest.approx(beta_fn(a, b) * a / (a + b), rel=1e-13)


def test_beta_rejects_nonpositive():
    with pytest.raises(ValueError):
        beta_fn(0.0, 1.0)
    with pytest.raises(ValueError):
        beta_fn(1.0, -2.0)


def test_bessel_j_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    for n in (1, 2, 17, 60):
        assert bessel_j(n, 0.0) == 0.0


def test_bessel_j1_against_power_series():
    # 30-term alternating series sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
    x = 2.0
    acc = 0.0
    for k in range(30):
        acc += (-1.0) ** k * (x / 2.0) ** (2 * k + 1) / (
            math.factorial(k) * math.factorial(k + 1))
    assert bessel_j(1, x) == pytest.approx(acc, abs=1e-14)
    assert acc == pytest.approx(0.576724807756873387, abs=1e-15)


def test_bessel_j_reference_sweep():
    for (n, x), ref in _J_REF.items():
        assert bessel_j(n, x) == pytest.approx(ref, abs=1e-12), (n, x)


def test_bessel_j_negative_argument_parity():
    for n in (0, 1, 4, 9):
        assert bessel_j(n, -7.3) == pytest.approx(
            (-1.0) ** n * bessel_j(n, 7.3), rel=1e-13)


def test_bessel_j_range_guard():
    with pytest.raises(ValueError):
        bessel_j(61, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, 101.0)
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)


def test_bessel_i_at_zero():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0


def test_bessel_i0_against_monotone_series():
    # all-positive series sum_k (y/2)^(2k) / (k!)^2, tail below 1e-16
    y = 2.0
    acc = sum((y / 2.0) ** (2 * k) / math.factorial(k) ** 2 for k in range(25))
    assert bessel_i(0, y) == pytest.approx(acc, rel=1e-15)
    assert acc == pytest.approx(2.2795853023360673, rel=1e-12)


def test_bessel_i_reference_sweep():
    for (n, y), ref in _I_REF.items():
        assert bessel_i(n, y) == pytest.approx(ref, rel=1e-12), (n, y)


def test_chebyshev_v_trivial():
    for x in (-1.0, -0.4, 0.0, 0.9, 1.0):
        assert chebyshev_v(0, x) == 1.0
    assert chebyshev_v(1, 0.5) == 0.0


def test_chebyshev_v_trig_closed_form():
    # V_n(cos th) = cos((n + 1/2) th) / cos(th/2)
    for n in (1, 2, 5, 11):
        for x in (-0.8, 0.3, 0.77):
            th = math.acos(x)
            ref = math.cos((n + 0.5) * th) / math.cos(0.5 * th)
            assert chebyshev_v(n, x) == pytest.approx(ref, abs=1e-13), (n, x)
    assert chebyshev_v(5, 0.3) == pytest.approx(0.96416, abs=1e-13)


def test_chebyshev_domain_guard():
    with pytest.raises(ValueError):
        chebyshev_v(3, 1.5)


def test_table_matches_direct_evaluation():
    tab = SpecialFnTable(40, x_bessel_j=12.0, y_bessel_i=4.2, x_chebyshev=0.3)
    for n in (0, 1, 7, 23, 40):
        assert tab.j(n) == pytest.approx(bessel_j(n, 12.0), abs=1e-12)
        assert tab.i(n) == pytest.approx(bessel_i(n, 4.2), rel=1e-12)
        assert tab.v(n) == pytest.approx(chebyshev_v(n, 0.3), abs=1e-12)


def test_table_small_argument_uses_series_branch():
    tab = SpecialFnTable(10, x_bessel_j=2.0)
    assert tab.j(1) == pytest.approx(0.576724807756873387, abs=1e-14)


def test_table_unbuilt_column_rejected():
    tab = SpecialFnTable(10, x_bessel_j=2.0)
    with pytest.raises(ValueError):
        tab.i(0)
    with pytest.raises(ValueError):
        tab.j(11)
