"""Two-period square-root-utility economy with fiat money.

Households of generation ``t >= 1`` are endowed with ``(e, 0)`` and have
utility ``sqrt(c_t) + sqrt(c_{t+1})``. Equilibria are handled in return-rate
space, ``r_t = p_t / p_{t+1}``, where market clearing reads
``alpha_0 phi(r_1) = r_0`` and ``alpha_t phi(r_{t+1}) = r_t phi(r_t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .exceptions import DomainError, InfeasibleRateError, RangeError

GrowthSeries = Union[float, Sequence[float]]


@dataclass(frozen=True)
class SimpleEconomy:
    """Growth factors ``alpha_t`` (or a constant) bracketed by ``bounds``."""

    alpha: GrowthSeries
    endow: float = 1.0
    bounds: tuple = None

    def __post_init__(self):
        if self.endow <= 0:
            raise DomainError("endowment must be positive")
        values = [self.alpha] if np.isscalar(self.alpha) else list(self.alpha)
        if any(a <= 0 for a in values):
            raise DomainError("growth factors must be positive")
        bounds = self.bounds or (min(values), max(values))
        lo, hi = bounds
        if not 0 < lo <= hi or any(a < lo or a > hi for a in values):
            raise DomainError(f"bounds {bounds} do not bracket the growth factors")
        object.__setattr__(self, "bounds", (float(lo), float(hi)))

    def growth(self, t: int) -> float:
        return _growth(self.alpha, t)


def _growth(alpha: GrowthSeries, t: int) -> float:
    if np.isscalar(alpha):
        return float(alpha)
    try:
        return float(alpha[t])
    except IndexError:
        raise RangeError(f"growth series has no entry for t={t}") from None


def phi(r: float) -> float:
    """``r / (1 + r)``."""
    if r <= 0:
        raise DomainError(f"phi is defined for r > 0, got {r}")
    return r / (1.0 + r)


def phi_inverse(y: float) -> float:
    if not 0 < y < 1:
        raise InfeasibleRateError(f"phi^-1 needs an argument in (0, 1), got {y}")
    return y / (1.0 - y)


def psi(r: float) -> float:
    """Inverse of ``x -> x phi(x)``: the positive root of ``x**2 = r (1 + x)``."""
    if r <= 0:
        raise DomainError(f"psi is defined for r > 0, got {r}")
    return 0.5 * (r + math.sqrt(r * r + 4.0 * r))


def step(alpha_t: float, r: float) -> float:
    """One backward map ``f_t(r) = psi(alpha_t phi(r))``."""
    return psi(alpha_t * phi(r))


def backward_rate(alpha: GrowthSeries, depth: int, seed: float) -> float:
    """Compose ``f_1 o ... o f_depth`` and evaluate it at ``seed``.

    ``alpha[t]`` is the growth factor of period ``t`` (index 0 is unused by
    the composition); a scalar means constant growth.
    """
    if depth < 1:
        raise RangeError("depth must be at least 1")
    if seed <= 0:
        raise DomainError("seed must be positive")
    r = float(seed)
    for t in range(depth, 0, -1):
        r = step(_growth(alpha, t), r)
    return r


@dataclass
class Convergence:
    rate: float
    depth: int
    delta: float
    trace: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.delta < 1e-12


def solve_first_rate(alpha: GrowthSeries, seed: float, horizon: int = 60,
                     tol: float = 1e-12) -> Convergence:
    """Increase the backward depth until successive ``r_1`` differ by < ``tol``.

    Stops at depth ``10 * horizon`` at the latest; the achieved delta is
    reported either way.
    """
    max_depth = 10 * horizon
    if not np.isscalar(alpha):
        max_depth = min(max_depth, len(alpha) - 1)
    previous = backward_rate(alpha, 1, seed)
    trace = [previous]
    delta = math.inf
    depth = 1
    while depth < max_depth:
        depth += 1
        current = backward_rate(alpha, depth, seed)
        trace.append(current)
        delta = abs(current - previous)
        previous = current
        if delta < tol:
            break
    return Convergence(rate=previous, depth=depth, delta=delta, trace=trace)


def equilibrium_path(r1: float, alpha: GrowthSeries, horizon: int) -> np.ndarray:
    """Rates ``r_0..r_horizon`` of the monetary equilibrium indexed by ``r1``.

    Raises
    ------
    InfeasibleRateError
        If the forward recursion leaves the range of ``phi``, i.e. ``r1``
        exceeds the monetary-equilibrium range.
    """
    if r1 <= 0:
        raise DomainError("r1 must be positive")
    if horizon < 1:
        raise RangeError("horizon must be at least 1")
    rates = np.empty(horizon + 1)
    rates[0] = _growth(alpha, 0) * phi(r1)
    rates[1] = r1
    for t in range(1, horizon):
        r = rates[t]
        rates[t + 1] = phi_inverse(r * phi(r) / _growth(alpha, t))
    return rates


def sensitivity(alpha: float, t: int) -> float:
    """Derivative of the optimal first rate with respect to ``alpha_t``
    in a stationary economy: ``(1 + alpha) / (2 + alpha)**t``."""
    if t < 1:
        raise RangeError("t must be at least 1")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    return (1.0 + alpha) / (2.0 + alpha) ** t


def finite_difference_sensitivity(alpha: float, t: int, depth: int = None,
                                  rel_step: float = 1e-6) -> float:
    """Central finite difference of the converged first rate w.r.t. ``alpha_t``."""
    depth = depth or t + 80
    h = rel_step * alpha

    def first_rate(bump):
        series = np.full(depth + 1, float(alpha))
        series[t] += bump
        return backward_rate(series, depth, alpha)

    return (first_rate(h) - first_rate(-h)) / (2.0 * h)


def lower_seed_bound(alpha_min: float) -> float:
    """Largest ``L <= 1`` below which every backward map is non-decreasing."""
    if alpha_min <= 0:
        raise DomainError("alpha_min must be positive")
    gap = 4.0 / alpha_min - 1.0
    if gap <= 1.0:
        return 1.0
    return min(1.0, 8.0 / (alpha_min * (gap * gap - 1.0)))


def upper_seed_bound(alpha_max: float) -> float:
    """``psi(alpha_max)``: above it every backward map is non-increasing."""
    return psi(alpha_max)


def stationary_prices(alpha: float, n: int) -> np.ndarray:
    """Money price 1 followed by ``(1 + alpha) / alpha**(t + 1)``, ``t = 1..n-1``."""
    t = np.arange(1, n)
    return np.concatenate([[1.0], (1.0 + alpha) / alpha ** (t + 1)])


def rates_to_prices(rates) -> np.ndarray:
    """Chain ``p_0 = 1`` and ``p_{t+1} = p_t / r_t``."""
    rates = np.asarray(rates, dtype=float)
    return np.concatenate([[1.0], 1.0 / np.cumprod(rates)])
