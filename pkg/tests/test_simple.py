import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olgpaygo import simple
from olgpaygo.exceptions import DomainError, InfeasibleRateError, RangeError


@settings(max_examples=500, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e6))
def test_psi_inverts_x_phi(x):
    assert simple.psi(x * simple.phi(x)) == pytest.approx(x, rel=1e-12)


def test_phi_inverse_round_trip_and_range():
    assert simple.phi_inverse(simple.phi(3.0)) == pytest.approx(3.0)
    for y in (0.0, 1.0, 1.5):
        with pytest.raises(InfeasibleRateError):
            simple.phi_inverse(y)
    with pytest.raises(DomainError):
        simple.phi(0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("seed", [0.1, 1.0, 10.0])
def test_backward_iteration_converges_to_alpha(alpha, seed):
    conv = simple.solve_first_rate(alpha, seed)
    assert conv.converged
    assert abs(conv.rate - alpha) < 1e-10


def test_fixed_point_of_stationary_map():
    assert simple.step(2.0, 2.0) == pytest.approx(2.0, rel=1e-14)


def test_equilibrium_path_stationary_and_overshoot():
    path = simple.equilibrium_path(2.0, 2.0, 10)
    assert path[0] == pytest.approx(4 / 3)
    # the forward map is expanding, so round-off grows along the path
    np.testing.assert_allclose(path[1:], 2.0, rtol=1e-9)
    np.testing.assert_allclose(simple.rates_to_prices(path)[:4], simple.stationary_prices(2.0, 4))
    with pytest.raises(InfeasibleRateError):
        simple.equilibrium_path(2.5, 2.0, 60)


def test_stationary_prices():
    p = simple.stationary_prices(2.0, 4)
    np.testing.assert_allclose(p, [1.0, 3 / 4, 3 / 8, 3 / 16])


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.5])
@pytest.mark.parametrize("t", range(1, 7))
def test_sensitivity_matches_finite_difference(alpha, t):
    exact = simple.sensitivity(alpha, t)
    fd = simple.finite_difference_sensitivity(alpha, t)
    assert abs(fd - exact) / exact < 1e-5


def test_sensitivity_values():
    assert simple.sensitivity(2.0, 1) == pytest.approx(0.75)
    assert simple.sensitivity(1.0, 2) == pytest.approx(2 / 9)
    with pytest.raises(RangeError):
        simple.sensitivity(2.0, 0)


def test_seed_bounds():
    assert simple.upper_seed_bound(2.0) == pytest.approx(1 + math.sqrt(3))
    assert simple.lower_seed_bound(2.0) == 1.0
    lo = simple.lower_seed_bound(0.5)
    assert 0 < lo < 1
    alpha = 0.5
    # monotonicity condition holds with equality at the bound
    assert (alpha / 2) * (1 + math.sqrt(1 + 8 / (alpha * lo))) / 2 == pytest.approx(1.0)


def test_bounded_economy_and_series_indexing():
    econ = simple.SimpleEconomy(alpha=[1.5, 2.0, 2.5])
    assert econ.bounds == (1.5, 2.5)
    assert econ.growth(2) == 2.5
    with pytest.raises(RangeError):
        econ.growth(3)
    with pytest.raises(DomainError):
        simple.SimpleEconomy(alpha=[1.0, 2.0], bounds=(1.5, 3.0))
