import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svteleport import analytics
from svteleport.errors import InvalidOutcomeError, InvalidParameterError

import oracles


def test_p_m_number_values():
    assert analytics.p_m_number(5, 0.9, 5) == pytest.approx(0.19, abs=1e-15)
    assert analytics.p_m_number(5, 0.9, 6) == 0.0
    assert analytics.p_m_number(5, 0.9, 4) == pytest.approx(0.19 * 0.81, rel=1e-14)
    with pytest.raises(InvalidParameterError):
        analytics.p_m_number(5, 1.0, 5)


@pytest.mark.parametrize("N,lam", [(0, 0.3), (5, 0.9), (7, 0.5)])
def test_p_m_number_geometric_sum(N, lam):
    M = 400
    total = sum(analytics.p_m_number(N, lam, m) for m in range(-M, N + 1))
    assert total == pytest.approx(1.0, abs=lam ** (2 * (N + M)) + 1e-14)


def test_p_m_coherent_vacuum_target():
    # vacuum target: m = -n_A, so P(m) = (1 - lam^2) lam^{2|m|}
    lam = 0.7
    for m in range(-5, 3):
        expected = (1 - lam**2) * lam ** (2 * abs(m)) if m <= 0 else 0.0
        assert analytics.p_m_coherent(0.0, lam, m) == pytest.approx(expected, abs=1e-15)


def test_p_m_coherent_product_resource():
    # lam = 0 leaves the resource in vacuum: P(m) is the target's Poisson law
    alpha = 1.3
    p = oracles.poisson_probs(alpha**2, 30)
    for m in range(0, 12):
        assert analytics.p_m_coherent(alpha, 0.0, m) == pytest.approx(p[m], rel=1e-13)
    assert analytics.p_m_coherent(0.0, 0.0, 0) == 1.0
    assert analytics.p_m_coherent(0.0, 0.0, 1) == 0.0


@pytest.mark.parametrize("alpha,lam", [(2.0, 0.7), (6.0, 0.9), (6.0, 0.99), (0.5, 0.2)])
def test_p_m_coherent_completeness(alpha, lam):
    # m < 0 branch sums geometrically; m >= 0 summed directly
    neg = (1 - lam**2) * math.exp(-alpha**2 * (1 - lam**2)) * lam**2 / (1 - lam**2)
    pos = sum(analytics.p_m_coherent(alpha, lam, m) for m in range(0, int(alpha**2 * 4 + 60)))
    assert neg + pos == pytest.approx(1.0, abs=1e-9)


def test_p_m_coherent_series_against_direct_sum():
    alpha, lam = 2.0, 0.7
    p = oracles.poisson_probs(alpha**2, 200)
    for m in range(0, 10):
        direct = (1 - lam**2) * sum(lam ** (2 * n) * p[n + m] for n in range(200 - m))
        assert analytics.p_m_coherent(alpha, lam, m) == pytest.approx(direct, rel=1e-13)


def test_misprint_branch_resolved_by_brute_force():
    alpha, lam = 2.0, 0.7
    c = oracles.coherent_amps(alpha, 80)
    c = c / np.linalg.norm(c)
    ratios = {}
    for m in range(-1, -7, -1):
        brute = oracles.brute_pmf(c, lam, m, 200)
        plus = (1 - lam**2) * lam ** (2 * abs(m)) * math.exp(-alpha**2 * (1 - lam**2))
        minus = (1 - lam**2) * lam ** (-2 * abs(m)) * math.exp(-alpha**2 * (1 - lam**2))
        assert brute == pytest.approx(plus, rel=1e-10)
        assert analytics.p_m_coherent(alpha, lam, m) == pytest.approx(brute, rel=1e-10)
        ratios[m] = minus / brute
    assert ratios[-4] > 10
    assert all(ratios[m] > ratios[m + 1] for m in range(-6, -1))


def test_f_m_coherent_negative_branch():
    expected = math.exp(-0.36)
    assert expected == pytest.approx(0.69768, abs=1e-5)
    for m in (-1, -3, -20):
        assert analytics.f_m_coherent(6.0, 0.9, m) == pytest.approx(expected, rel=1e-15)


def test_f_m_coherent_direct_overlap():
    # corrected + displaced B state: amplitudes lam^{n-m} c_n on |n>, n >= m
    alpha, lam = 2.0, 0.7
    c = oracles.coherent_amps(alpha, 120).real
    for m in range(0, 8):
        n = np.arange(m, c.size)
        amps = lam ** (n - m) * c[m:]
        direct = np.dot(c[m:], amps) ** 2 / np.dot(amps, amps)
        assert analytics.f_m_coherent(alpha, lam, m) == pytest.approx(direct, rel=1e-12)


def test_f_m_coherent_high_lambda_profile():
    ms = np.arange(0, 60)
    f = analytics.f_m_coherent_table(6.0, 0.99, ms)
    # near 1 on the bulk of the Poisson support, collapsing past the mean
    assert np.all(f[:20] > 0.99)
    assert f[36] < 0.6 and f[59] < 1e-3
    assert np.all(np.diff(f) <= 1e-15)
    assert np.all((f >= 0) & (f <= 1))


def test_f_m_coherent_zero_probability():
    with pytest.raises(InvalidOutcomeError):
        analytics.f_m_coherent(0.0, 0.5, 2)


def test_f0_undisplaced():
    assert analytics.f0_undisplaced(6.0, 0.9) == pytest.approx(0.69768, abs=1e-5)
    assert analytics.f0_undisplaced(0.0, 0.4) == 1.0
    values = [analytics.f0_undisplaced(6.0, lam) for lam in (0.9, 0.99, 0.999, 0.99999)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1.0, abs=1e-8)


def test_f0_ratio_form_consistency():
    alpha, lam = 6.0, 0.9
    nbar = alpha**2
    exact = analytics.f0_undisplaced(alpha, lam)
    consistent = analytics.f0_ratio_form(nbar, analytics.nbar_sv_consistent(lam), lam)
    assert consistent == pytest.approx(exact, rel=1e-14)
    # with the resource's own mean photon number the printed form disagrees
    printed = analytics.f0_ratio_form(nbar, lam**2 / (1 - lam**2), lam)
    assert printed == pytest.approx(math.exp(-nbar * (1 - lam**2)), rel=1e-14)
    assert abs(printed - exact) > 0.5


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.01, 0.99))
def test_f0_forms_agree_at_consistent_nbar(alpha, lam):
    a = analytics.f0_undisplaced(alpha, lam)
    b = analytics.f0_ratio_form(alpha**2, analytics.nbar_sv_consistent(lam), lam)
    assert abs(a - b) <= 1e-12


def test_epr_variance():
    assert analytics.epr_variance(0.0) == 2.0
    assert analytics.epr_variance(1.0) == pytest.approx(0.27067, abs=1e-5)
    with pytest.raises(InvalidParameterError):
        analytics.epr_variance(-1.0)


def test_series_handles_large_mean():
    # leading Poisson terms underflow in linear space at this mean
    p = analytics.p_m_coherent(40.0, 0.99, 0)
    assert 0 < p < 1
    assert math.isfinite(analytics.f_m_coherent(40.0, 0.99, 0))
