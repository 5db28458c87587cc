import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olgpaygo.core import (
    EconomySpec,
    GenerationProfile,
    PriceSeq,
    excess_demand,
    log_demand,
    real_savings_per_capita,
    relabel_growth,
)
from olgpaygo.exceptions import DegenerateInputError, DomainError, RangeError

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
thetas = st.floats(min_value=0.1, max_value=10.0)


def test_symmetric_demand_splits_wealth_evenly():
    x = log_demand([1, 1, 1], [1, 1, 1], 1.0)
    np.testing.assert_allclose(x, [1, 1, 1], rtol=1e-12)


def test_demand_at_patient_weights():
    # wealth 3, weights (1, 2, 4) / 7
    x = log_demand([1, 1, 1], [3, 0, 0], 2.0)
    np.testing.assert_allclose(x, np.array([1, 2, 4]) * 3 / 7, rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(positive, min_size=3, max_size=3), st.lists(positive, min_size=3, max_size=3),
       thetas, positive)
def test_demand_budget_and_homogeneity(p, e, theta, scale):
    p, e = np.array(p), np.array(e)
    x = log_demand(p, e, theta)
    assert abs(p @ x - p @ e) <= 1e-12 * (p @ e)
    np.testing.assert_allclose(log_demand(scale * p, e, theta), x, rtol=1e-12)


def test_demand_rejects_bad_inputs():
    with pytest.raises(DomainError):
        log_demand([1, 0, 1], [1, 1, 1], 1.0)
    with pytest.raises(DomainError):
        log_demand([1, 1, 1], [1, -1, 1], 1.0)
    with pytest.raises(DegenerateInputError):
        log_demand([1, 1, 1], [0, 0, 0], 1.0)


def test_price_seq_invariants():
    seq = PriceSeq.normalize([2.0, 1.0, 0.5])
    assert seq[0] == 1.0 and seq.normalized
    np.testing.assert_allclose(seq.rates(), [2.0, 2.0])
    with pytest.raises(DomainError):
        PriceSeq([1.0, -1.0])
    with pytest.raises(DomainError):
        PriceSeq([2.0, 1.0], normalized=True)
    with pytest.raises(ValueError):
        seq.values[0] = 3.0


def test_economy_spec_defaults_and_validation():
    econ = EconomySpec(gamma=(1.1, 1.2), theta=2.0, phi=0.5)
    assert econ.horizon == 3
    assert econ.demographic_growth(1) == 1.2
    np.testing.assert_allclose(econ.weights, [1, 2, 4])
    with pytest.raises(DomainError):
        EconomySpec(gamma=(1.0,), theta=0.5, phi=0.2)
    with pytest.raises(DomainError):
        EconomySpec(gamma=(1.0,), theta=1.0, phi=1.5)
    with pytest.raises(DomainError):
        EconomySpec(gamma=(0.0,), theta=1.0, phi=0.2)


def _stationary_generations(n, alpha, theta):
    return [GenerationProfile(alpha ** t, np.ones(3), theta) for t in range(n)]


def test_excess_demand_vanishes_on_stationary_alpha_mode():
    alpha, theta = 1.3, 2.0
    gens = _stationary_generations(8, alpha, theta)
    prices = alpha ** -np.arange(10.0)
    for period in range(2, 8):
        assert abs(excess_demand(period, prices, gens)) < 1e-12


def test_excess_demand_window():
    gens = _stationary_generations(6, 1.2, 1.5)
    prices = np.ones(10)
    with pytest.raises(RangeError):
        excess_demand(1, prices, gens)
    with pytest.raises(RangeError):
        excess_demand(6, prices, gens)
    with pytest.raises(RangeError):
        excess_demand(5, np.ones(6), gens)


def _tail_closed_form(p, alpha, theta):
    w = 1 + theta + theta ** 2
    num = (theta ** 2 * (p[0] + p[1]) - (1 + theta) * p[2]
           + alpha * (theta + theta ** 2) * p[1] - alpha * (p[2] + p[3]))
    return num / ((p[0] + p[1]) * (1 + alpha) * w)


@settings(max_examples=100, deadline=None)
@given(st.floats(1.01, 5), st.floats(1.0, 5), st.lists(st.floats(0.1, 10), min_size=4, max_size=4))
def test_relabeled_savings_match_tail_closed_form(alpha, theta, p):
    econ = EconomySpec(gamma=(alpha,) * 3, theta=theta, phi=1.0)
    got = real_savings_per_capita(0, p, econ)
    assert got == pytest.approx(_tail_closed_form(np.array(p), alpha, theta), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("alpha,theta", [(1.14, 2.82), (2.0, 1.5), (1.5, 3.0)])
def test_limit_savings_theta_and_alpha_modes(alpha, theta):
    econ = EconomySpec(gamma=(alpha,) * 5, theta=theta, phi=1.0)
    t = np.arange(6.0)
    assert abs(real_savings_per_capita(0, theta ** t, econ)) < 1e-12
    a = 1 / alpha
    expected = (theta - a) * (2 * (theta + a) + theta * a + 1) / (
        (1 + theta + theta ** 2) * (2 + alpha + a))
    got = real_savings_per_capita(0, alpha ** -t, econ)
    assert got > 0
    assert got == pytest.approx(expected, rel=1e-12)


def test_relabeled_savings_homogeneous_and_checked():
    econ = EconomySpec(gamma=(1.5, 1.2, 1.1), theta=2.0, phi=0.2)
    p = np.array([1.0, 0.8, 0.6, 0.5])
    assert real_savings_per_capita(0, 7 * p, econ) == pytest.approx(
        real_savings_per_capita(0, p, econ), rel=1e-12)
    with pytest.raises(RangeError):
        real_savings_per_capita(1, p, econ)


def test_relabel_growth_stationary_and_errors():
    assert relabel_growth([2.0] * 5) == pytest.approx([4.0, 4.0])
    with pytest.raises(RangeError):
        relabel_growth([1.0, 2.0])
    with pytest.raises(DomainError):
        relabel_growth([1.0, -2.0, 1.0])
