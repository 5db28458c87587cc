"""Tail economies supplying boundary prices to the backward solver.

The full-lifespan tail has constant population growth ``alpha``, endowment
``(e, e, e)`` and weight ``theta``. Its market-clearing condition is the
fourth-order linear recurrence

    alpha**2 p_{t+4} = -theta**2 p_t - theta (theta + alpha) p_{t+1}
                       + Delta p_{t+2} - alpha (theta + alpha) p_{t+3}

whose characteristic roots are ``theta``, ``1/alpha`` and the two roots of
``alpha l**2 + (1 + alpha)(1 + theta) l + theta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import NUMERIC, EconomySpec, relabel_growth
from .exceptions import (
    AdmissibilityError,
    ContractViolation,
    DomainError,
    ParameterError,
    RangeError,
)


@dataclass(frozen=True)
class FullLifespanTail:
    """Tail with growth ``alpha`` and preference weight ``theta``.

    Only positivity is enforced on construction. The equilibrium
    characterization assumes ``min(alpha, theta) > 1`` and the
    prone-to-savings inequality; see :meth:`hypotheses_hold`.
    """

    alpha: float
    theta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.theta <= 0:
            raise DomainError("tail alpha and theta must be positive")

    @property
    def lambda3(self) -> float:
        return lambda3(self.alpha, self.theta)

    @property
    def a3_upper(self) -> float:
        """Upper end of the admissible interval, ``1 / (alpha |lambda3|)``."""
        return 1.0 / (self.alpha * abs(self.lambda3))

    @property
    def a3_interval(self) -> tuple:
        return (-1.0, self.a3_upper)

    def hypotheses_hold(self) -> bool:
        return min(self.alpha, self.theta) > 1 and prone_to_savings_tail(self)


@dataclass(frozen=True)
class MinLifespanTail:
    """Bridging generation ``(e_y, e_y, e_o)`` followed by one-good periods."""

    e_y: float
    e_o: float
    theta: float

    def __post_init__(self):
        if not 0 < self.e_o < self.e_y:
            raise DomainError("need 0 < e_o < e_y")
        if not 0 < self.theta < 0.5:
            raise DomainError("theta must lie in (0, 1/2)")


@dataclass(frozen=True)
class BoundaryPrices:
    """Pareto-optimal tail price block ``p_m..p_{m+3}`` for a given ``a3``."""

    a3: float
    prices: np.ndarray
    tail: FullLifespanTail

    def __post_init__(self):
        prices = np.array(self.prices, dtype=float)
        if prices.shape != (4,) or not np.all(prices > 0):
            raise DomainError("boundary block must hold four positive prices")
        prices.setflags(write=False)
        object.__setattr__(self, "prices", prices)


class TailVerdict(enum.Enum):
    EQUILIBRIUM = "equilibrium"
    NOT_EQUILIBRIUM = "not-equilibrium"


def _check_positive(alpha, theta):
    if alpha <= 0 or theta <= 0:
        raise DomainError("alpha and theta must be positive")


def _quadratic_roots(alpha, theta):
    b = (1 + alpha) * (1 + theta)
    disc = b * b - 4 * theta * alpha
    root = math.sqrt(disc)
    return (-b + root) / (2 * alpha), (-b - root) / (2 * alpha)


def lambda3(alpha: float, theta: float) -> float:
    """The small negative root; ``|lambda3| < 1/alpha``."""
    _check_positive(alpha, theta)
    return _quadratic_roots(alpha, theta)[0]


def lambda4(alpha: float, theta: float) -> float:
    """The large negative root; ``|lambda4| > theta``."""
    _check_positive(alpha, theta)
    return _quadratic_roots(alpha, theta)[1]


def recurrence_delta(alpha: float, theta: float) -> float:
    return ((1 + alpha + alpha ** 2) * (1 + theta + theta ** 2)
            - alpha ** 2 - alpha * theta - theta ** 2)


def omega_matrix(alpha: float, theta: float) -> np.ndarray:
    """Companion matrix advancing ``(p_t, .., p_{t+3})`` by one period."""
    a2 = alpha * alpha
    omega = np.zeros((4, 4))
    omega[0, 1] = omega[1, 2] = omega[2, 3] = 1.0
    omega[3] = [
        -theta ** 2 / a2,
        -theta * (theta + alpha) / a2,
        recurrence_delta(alpha, theta) / a2,
        -alpha * (theta + alpha) / a2,
    ]
    return omega


def characteristic_coefficients(alpha: float, theta: float) -> np.ndarray:
    """Monic coefficients of ``det(l I - Omega)``, highest degree first."""
    row = omega_matrix(alpha, theta)[3]
    return np.concatenate([[1.0], -row[::-1]])


def omega_eigen(alpha: float, theta: float) -> list:
    """Closed-form eigenpairs ``(lambda_i, (1, l, l**2, l**3))``.

    Ordered as ``theta``, ``1/alpha``, ``lambda3``, ``lambda4``.
    """
    _check_positive(alpha, theta)
    l3, l4 = _quadratic_roots(alpha, theta)
    values = (theta, 1.0 / alpha, l3, l4)
    return [(lam, lam ** np.arange(4)) for lam in values]


def _mode_sequence(lam: float, n: int) -> np.ndarray:
    return lam ** np.arange(n, dtype=float)


def tail_price_sequence(tail: FullLifespanTail, coeffs, n: int) -> np.ndarray:
    """``p_t = a1 theta**t + a2 alpha**-t + a3 lambda3**t`` for ``t < n``.

    Evaluated in closed form; iterating the recurrence would amplify
    round-off through the ``lambda4`` mode.
    """
    a1, a2, a3 = coeffs
    return (a1 * _mode_sequence(tail.theta, n)
            + a2 * _mode_sequence(1.0 / tail.alpha, n)
            + a3 * _mode_sequence(tail.lambda3, n))


def recurrence_residuals(tail: FullLifespanTail, prices) -> np.ndarray:
    """Relative residuals of the tail recurrence along ``prices``."""
    p = np.asarray(prices, dtype=float)
    alpha, theta = tail.alpha, tail.theta
    terms = np.stack([
        -theta ** 2 * p[:-4],
        -theta * (theta + alpha) * p[1:-3],
        recurrence_delta(alpha, theta) * p[2:-2],
        -alpha * (theta + alpha) * p[3:-1],
        -alpha ** 2 * p[4:],
    ])
    scale = np.abs(terms).max(axis=0)
    scale[scale == 0] = 1.0
    return np.abs(terms.sum(axis=0)) / scale


def boundary_block(tail: FullLifespanTail, a3) -> np.ndarray:
    """Unchecked, vectorized boundary block; shape ``a3.shape + (4,)``."""
    a3 = np.asarray(a3, dtype=float)[..., None]
    alpha_mode = _mode_sequence(1.0 / tail.alpha, 4)
    lam_mode = _mode_sequence(tail.lambda3, 4)
    return (alpha_mode + a3 * lam_mode) / (1.0 + a3)


def boundary_prices(tail: FullLifespanTail, a3: float,
                    probe: int = NUMERIC.probe_horizon) -> BoundaryPrices:
    """Pareto-optimal boundary block for ``a3 in (-1, 1/(alpha |lambda3|))``.

    Raises
    ------
    AdmissibilityError
        If ``a3`` is outside the open interval, too close to the pole at
        -1, or the implied tail prices turn non-positive within ``probe``
        periods.
    """
    lo, hi = tail.a3_interval
    if not lo < a3 < hi:
        raise AdmissibilityError(f"a3={a3} outside ({lo}, {hi:.6g})")
    if abs(1.0 + a3) < NUMERIC.pole_guard:
        raise AdmissibilityError("a3 too close to the pole at -1")
    seq = tail_price_sequence(tail, (0.0, 1.0, a3), probe) / (1.0 + a3)
    if not np.all(seq > 0):
        bad = int(np.argmax(seq <= 0))
        raise AdmissibilityError(f"tail price turns non-positive at t={bad}")
    return BoundaryPrices(a3=float(a3), prices=seq[:4], tail=tail)


def tail_rates(tail: FullLifespanTail, a3: float, n: int) -> np.ndarray:
    """Return rates ``p_t / p_{t+1}`` of the boundary-indexed tail, ``t < n``."""
    seq = tail_price_sequence(tail, (0.0, 1.0, a3), n + 1)
    return seq[:-1] / seq[1:]


def tail_equilibrium_check(tail: FullLifespanTail, coeffs,
                           probe: int = NUMERIC.probe_horizon,
                           rtol: float = NUMERIC.rtol) -> TailVerdict:
    """Decide whether ``(a1, a2, a3)`` indexes a tail equilibrium.

    The fourth-mode weight is implicitly zero, so the weights must sum to
    one and ``a1`` must be non-negative.
    """
    a1, a2, a3 = (float(c) for c in coeffs)
    if abs(a1 + a2 + a3 - 1.0) > 1e-12:
        raise ContractViolation("mode weights must sum to 1")
    if a1 < 0:
        raise ContractViolation("theta-mode weight must be non-negative")
    seq = tail_price_sequence(tail, (a1, a2, a3), probe)
    if not np.all(seq > 0):
        return TailVerdict.NOT_EQUILIBRIUM
    if np.any(recurrence_residuals(tail, seq) > rtol):
        return TailVerdict.NOT_EQUILIBRIUM
    return TailVerdict.EQUILIBRIUM


def min_lifespan_boundary(tail: MinLifespanTail, p0) -> float:
    """Price of the one-good period after the bridging generation."""
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (2,) or not np.all(p0 > 0):
        raise DomainError("p0 must hold two positive prices")
    denom = tail.e_y + (4 * tail.theta - 1) * tail.e_o
    if denom <= 0:
        raise ParameterError("e_y + (4 theta - 1) e_o must be positive")
    return 2 * (1 - 2 * tail.theta) * p0.sum() * tail.e_y / denom


def prone_to_savings_tail(tail: FullLifespanTail) -> bool:
    return 1 + tail.theta + tail.alpha < tail.theta ** 2 * tail.alpha ** 2


def theta_lower_bound(phi: float, alpha_tilde: float, gamma: float) -> float:
    """Smallest ``theta`` for which ``gamma + (1 + theta) phi < alpha_tilde theta**2``."""
    if alpha_tilde <= 0:
        raise DomainError("alpha_tilde must be positive")
    return (phi + math.sqrt(phi * phi + 4 * alpha_tilde * (gamma + phi))) / (2 * alpha_tilde)


def prone_to_savings_economy(econ: EconomySpec, alpha_tilde) -> list:
    """Per relabeled period, whether ``gamma_{2t} + (1 + theta) phi < alpha~_t theta**2``."""
    alpha_tilde = list(alpha_tilde)
    if 2 * (len(alpha_tilde) - 1) >= len(econ.gamma):
        raise RangeError("gamma series too short for the relabeled periods")
    return [
        econ.gamma[2 * t] + (1 + econ.theta) * econ.phi < a * econ.theta ** 2
        for t, a in enumerate(alpha_tilde)
    ]


def bridged_relabel_growth(alpha) -> list:
    """Relabeled growth with the demographic series held at its last value.

    The final relabeled period straddles the tail, so the missing factors
    are set equal to the last observed one, giving ``alpha~ = alpha_last**2``
    there.
    """
    alpha = list(alpha)
    if len(alpha) % 2 == 0:
        raise RangeError("need an odd number of growth factors")
    return relabel_growth(alpha + [alpha[-1], alpha[-1]])
