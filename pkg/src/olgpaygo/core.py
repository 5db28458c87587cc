"""Domain types and primitive economic functions.

Households live three periods and have weighted-log utility
``log c0 + theta log c1 + theta**2 log c2``. Generations are stored per
capita together with an explicit size multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import DegenerateInputError, DomainError, RangeError

LIFESPAN = 3


@dataclass(frozen=True)
class NumericConfig:
    """Global numeric tolerances used across the package."""

    rtol: float = 1e-10
    positivity: float = 1e-12
    pole_guard: float = 1e-9
    probe_horizon: int = 200


NUMERIC = NumericConfig()


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeq:
    """Strictly positive prices indexed from period 0."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("prices must be a non-empty 1-d sequence")
        if not np.all(values > 0):
            raise DomainError("prices must be strictly positive")
        if self.normalized and values[0] != 1.0:
            raise DomainError("normalized price sequence must start at 1")
        object.__setattr__(self, "values", values)

    @classmethod
    def normalize(cls, values) -> "PriceSeq":
        values = np.asarray(values, dtype=float)
        if values.size and values[0] <= 0:
            raise DomainError("cannot normalize by a non-positive first price")
        scaled = values / values[0]
        scaled[0] = 1.0
        return cls(scaled, normalized=True)

    def __len__(self):
        return self.values.size

    def __getitem__(self, idx):
        return self.values[idx]

    def rates(self) -> np.ndarray:
        """Return rates ``p_t / p_{t+1}``."""
        return self.values[:-1] / self.values[1:]


@dataclass(frozen=True)
class EconomySpec:
    """A lifespan-3 weighted-log economy.

    Parameters
    ----------
    gamma : sequence of float
        Aggregate endowment growth factors ``H_{t+1} e_{t+1} / (H_t e_t)``.
    theta : float
        Preference weight, at least 1.
    phi : float
        Old-age endowment share in [0, 1]; endowments are ``(e, e, phi e)``.
    horizon : int, optional
        Number of modeled generations. Defaults to ``len(gamma) + 1``.
    alpha : sequence of float, optional
        Demographic growth factors. Only needed to split ``gamma`` into
        population and productivity growth; ``None`` means no productivity
        growth (``alpha == gamma``).
    """

    gamma: tuple
    theta: float
    phi: float
    horizon: Optional[int] = None
    alpha: Optional[tuple] = None

    def __post_init__(self):
        gamma = tuple(float(g) for g in self.gamma)
        if not gamma or any(g <= 0 for g in gamma):
            raise DomainError("gamma factors must be strictly positive")
        if self.theta < 1:
            raise DomainError(f"theta must be >= 1, got {self.theta}")
        if not 0 <= self.phi <= 1:
            raise DomainError(f"phi must lie in [0, 1], got {self.phi}")
        horizon = len(gamma) + 1 if self.horizon is None else int(self.horizon)
        if horizon < 1:
            raise DomainError("horizon must be at least 1")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "horizon", horizon)
        if self.alpha is not None:
            alpha = tuple(float(a) for a in self.alpha)
            if any(a <= 0 for a in alpha):
                raise DomainError("alpha factors must be strictly positive")
            object.__setattr__(self, "alpha", alpha)

    @property
    def weights(self) -> np.ndarray:
        """Utility weights ``(1, theta, theta**2)``."""
        return preference_weights(self.theta)

    def demographic_growth(self, t: int) -> float:
        if self.alpha is None:
            return self.gamma[t]
        return self.alpha[t]


@dataclass(frozen=True)
class GenerationProfile:
    """A homogeneous generation: ``size`` identical households."""

    size: float
    endowment: np.ndarray
    theta: float

    def __post_init__(self):
        endowment = _frozen_array(self.endowment)
        if self.size <= 0:
            raise DomainError("generation size must be positive")
        if endowment.shape != (LIFESPAN,):
            raise DomainError(f"endowment must have {LIFESPAN} entries")
        if np.any(endowment < 0) or not np.any(endowment > 0):
            raise DomainError("endowment must be non-negative and nonzero")
        object.__setattr__(self, "endowment", endowment)


def preference_weights(theta: float) -> np.ndarray:
    return np.array([1.0, theta, theta * theta])


def log_demand(prices, endowment, theta: float) -> np.ndarray:
    """Walrasian demand of a weighted-log household over three periods.

    Each period receives the share ``w_i / sum(w)`` of wealth ``p . e``
    with weights ``w = (1, theta, theta**2)``.
    """
    p = np.asarray(prices, dtype=float)
    e = np.asarray(endowment, dtype=float)
    if p.shape != (LIFESPAN,) or e.shape != (LIFESPAN,):
        raise DomainError("prices and endowment must have three entries")
    if not np.all(p > 0):
        raise DomainError("prices must be strictly positive")
    if np.any(e < 0):
        raise DomainError("endowment must be non-negative")
    wealth = float(p @ e)
    if wealth <= 0:
        raise DegenerateInputError("household wealth is zero")
    w = preference_weights(theta)
    return wealth * w / (w.sum() * p)


def excess_demand(period: int, prices, generations: Sequence[GenerationProfile]) -> float:
    """Aggregate excess demand in ``period``.

    ``generations[t]`` is born in period ``t``. Periods 0 and 1 involve the
    unmodeled initial old and are outside the window, as is any period whose
    young generation is not listed.
    """
    p = prices.values if isinstance(prices, PriceSeq) else np.asarray(prices, dtype=float)
    if period < LIFESPAN - 1 or period >= len(generations):
        raise RangeError(f"period {period} outside modeled window [2, {len(generations) - 1}]")
    if p.size < period + LIFESPAN:
        raise RangeError(f"prices do not cover the young generation of period {period}")
    total = 0.0
    for birth in range(period - LIFESPAN + 1, period + 1):
        gen = generations[birth]
        age = period - birth
        x = log_demand(p[birth:birth + LIFESPAN], gen.endowment, gen.theta)
        total += gen.size * (x[age] - gen.endowment[age])
    return total


def real_savings_per_capita(t: int, prices, econ: EconomySpec) -> float:
    """Real savings per capita of relabeled generation ``t``.

    The relabeled generation merges ``G_{2t}`` and ``G_{2t+1}``. Savings are
    valued at the normalized relabeled price ``p~_t / ||p~_t||`` (sum norm)
    and expressed in units of the per-capita endowment ``e_{2t}``.
    Homogeneous of degree zero in prices.
    """
    p = prices.values if isinstance(prices, PriceSeq) else np.asarray(prices, dtype=float)
    first = 2 * t
    if t < 0 or p.size < first + 4:
        raise RangeError(f"prices do not cover relabeled period {t}")
    if first >= len(econ.gamma):
        raise RangeError(f"relabeled period {t} beyond the gamma series")
    if not np.all(p[first:first + 4] > 0):
        raise DomainError("prices must be strictly positive")
    alpha = econ.demographic_growth(first)
    beta = econ.gamma[first] / alpha
    profile = np.array([1.0, 1.0, econ.phi])

    x_old = log_demand(p[first:first + 3], profile, econ.theta)
    x_young = log_demand(p[first + 1:first + 4], beta * profile, econ.theta)
    block = p[first:first + 2]
    saved_first = block @ (profile[:2] - x_old[:2])
    saved_second = block[1] * (beta * profile[0] - x_young[0])
    return float((saved_first + alpha * saved_second) / (block.sum() * (1.0 + alpha)))


def relabel_growth(alpha: Sequence[float]) -> list:
    """Two-period growth factors of the relabeled economy.

    ``a~_t = a_{2t} a_{2t+1} (1 + a_{2t+2}) / (1 + a_{2t})`` for every ``t``
    whose three inputs are available.
    """
    a = [float(v) for v in alpha]
    if any(v <= 0 for v in a):
        raise DomainError("growth factors must be strictly positive")
    if len(a) < 3:
        raise RangeError("relabeling needs at least three growth factors")
    return [
        a[2 * t] * a[2 * t + 1] * (1 + a[2 * t + 2]) / (1 + a[2 * t])
        for t in range((len(a) - 1) // 2)
    ]
