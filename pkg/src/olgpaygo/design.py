"""Pay-as-you-go transfers implied by an equilibrium.

Generation ``t`` receives ``s^t = x^t(p_t, p_{t+1}, p_{t+2}) - e^t``: negative
entries are contributions, positive entries benefits. Market clearing makes
the transfers balance period by period, and each household's transfers have
zero present value at equilibrium prices, so they can be read as a notional
account credited at the equilibrium return rates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import NUMERIC, EconomySpec
from .exceptions import DomainError, RangeError
from .simple import rates_to_prices
from .solver import EquilibriumCandidate, generation_sizes
from .tails import FullLifespanTail


def savings_vector(t: int, rates, econ: EconomySpec, endowment: float = 1.0) -> np.ndarray:
    """Transfers of generation ``t`` facing return rates ``(r_t, r_{t+1})``.

    Closed form in the rates, scaled by ``e_t / (1 + theta + theta**2)``::

        ((r1 + phi) / (r0 r1) - theta (1 + theta),
         theta (r0 + phi / r1) - (1 + theta**2),
         theta**2 r1 (1 + r0) - phi (1 + theta))
    """
    r0, r1 = (float(r) for r in rates)
    if r0 <= 0 or r1 <= 0:
        raise DomainError("rates must be positive")
    if t < 0:
        raise RangeError("generation index must be non-negative")
    theta, phi = econ.theta, econ.phi
    scale = endowment / (1 + theta + theta ** 2)
    return scale * np.array([
        (r1 + phi) / (r0 * r1) - theta * (1 + theta),
        theta * (r0 + phi / r1) - (1 + theta ** 2),
        theta ** 2 * r1 * (1 + r0) - phi * (1 + theta),
    ])


def contribution_rate(t: int, rates, econ: EconomySpec) -> float:
    """First-period transfer over endowment; negative when the young pay in."""
    r0, r1 = (float(r) for r in rates)
    theta, phi = econ.theta, econ.phi
    return ((r1 + phi) / (r0 * r1) - theta * (1 + theta)) / (1 + theta + theta ** 2)


@dataclass(frozen=True)
class PaygoDesign:
    """Per-generation transfers for ``G_0..G_{m+1}``.

    ``sigma`` is the signed first-period rate (transfer over endowment);
    ``contribution_paid`` is ``max(0, -sigma)``. ``replacement`` is the
    old-age transfer over the first-period endowment, a derived quantity
    with no canonical three-period definition.
    """

    savings: np.ndarray
    sizes: np.ndarray
    endowments: np.ndarray
    shares: np.ndarray
    sigma: np.ndarray
    contribution_paid: np.ndarray
    replacement: np.ndarray
    balance_residuals: np.ndarray

    @property
    def generations(self) -> int:
        return self.savings.shape[0]

    def rows(self):
        for t in range(self.generations):
            s1, s2, s3 = self.savings[t]
            yield {
                "generation": t,
                "s1": s1,
                "s2": s2,
                "s3": s3,
                "sigma_paper": self.sigma[t],
                "contribution_paid": self.contribution_paid[t],
                "replacement": self.replacement[t],
            }


def _generation_econs(econ: EconomySpec, tail: FullLifespanTail):
    if tail.theta < 1:
        raise DomainError("tail theta below 1 is not supported by the design")
    tail_econ = EconomySpec(gamma=(tail.alpha,), theta=tail.theta, phi=1.0)
    return [econ] * econ.horizon + [tail_econ] * 2


def build_design(candidate: EquilibriumCandidate, econ: EconomySpec, tail: FullLifespanTail,
                 sizes=None, endowments=None) -> PaygoDesign:
    """Transfers of every generation alive in the solved window.

    Without ``sizes``/``endowments`` the generations are measured in
    effective units (size 1, endowment ``H_t e_t / (H_0 e_0)``).
    """
    if not candidate.feasible:
        raise DomainError("design needs a feasible equilibrium")
    econs = _generation_econs(econ, tail)
    n = len(econs)
    if sizes is None:
        sizes = np.ones(n)
        endowments = generation_sizes(econ, tail) if endowments is None else endowments
    elif endowments is None:
        raise DomainError("endowments are required together with sizes")
    sizes = np.asarray(sizes, dtype=float)[:n]
    endowments = np.asarray(endowments, dtype=float)[:n]
    if sizes.size != n or endowments.size != n:
        raise RangeError(f"need sizes and endowments for {n} generations")

    rates = candidate.rates
    savings = np.array([
        savings_vector(t, rates[t:t + 2], econs[t], endowments[t]) for t in range(n)
    ])
    sigma = np.array([contribution_rate(t, rates[t:t + 2], econs[t]) for t in range(n)])
    shares = np.array([e.phi for e in econs])
    design = PaygoDesign(
        savings=savings,
        sizes=sizes,
        endowments=endowments,
        shares=shares,
        sigma=sigma,
        contribution_paid=np.maximum(0.0, -sigma),
        replacement=savings[:, 2] / endowments,
        balance_residuals=np.empty(0),
    )
    residuals = balance_check(design)
    object.__setattr__(design, "balance_residuals", residuals)
    return design


def balance_check(design: PaygoDesign, sizes=None) -> np.ndarray:
    """Aggregate transfers per period relative to aggregate endowment.

    Entry ``k`` covers period ``k``. Periods 0 and 1 also involve the
    unmodeled initial old and are returned as NaN.
    """
    sizes = design.sizes if sizes is None else np.asarray(sizes, dtype=float)
    n = design.generations
    if sizes.size < n:
        raise RangeError("sizes must cover every generation")
    s, e, share = design.savings, design.endowments, design.shares
    out = np.full(n, np.nan)
    for k in range(2, n):
        transfer = sizes[k - 2] * s[k - 2, 2] + sizes[k - 1] * s[k - 1, 1] + sizes[k] * s[k, 0]
        supply = (sizes[k - 2] * e[k - 2] * share[k - 2]
                  + sizes[k - 1] * e[k - 1] + sizes[k] * e[k])
        out[k] = transfer / supply
    return out


def present_values(design: PaygoDesign, prices) -> np.ndarray:
    """Present value of each generation's transfers at ``prices``."""
    p = np.asarray(prices, dtype=float)
    return np.array([p[t:t + 3] @ design.savings[t] for t in range(design.generations)])


class CassVerdict(enum.Enum):
    OPTIMAL_SIDE = "optimal-side"
    SUBOPTIMAL_SIDE = "suboptimal-side"


@dataclass(frozen=True)
class CassReport:
    """Finite-horizon reading of the Cass criterion (a heuristic, not a proof)."""

    verdict: CassVerdict
    first_violation: Optional[int]
    partial_sums: np.ndarray
    finite_horizon: bool = True


def cass_diagnostic(rates, sizes, alpha_min: float, tail_rate: Optional[float] = None,
                    rtol: float = NUMERIC.rtol) -> CassReport:
    """Flag the suboptimal side when some ``r_n < alpha_min`` (``n >= 1``).

    Comparisons allow a relative slack of ``rtol`` for round-off.
    ``tail_rate`` is the analytic limit rate beyond the window, if known.
    Partial sums of ``1 / (H_t p_t)`` use ``p_0 = 1``.
    """
    floor = alpha_min * (1.0 - rtol)
    rates = np.asarray(rates, dtype=float)
    sizes = np.asarray(sizes, dtype=float)
    prices = rates_to_prices(rates)
    n = min(prices.size, sizes.size)
    partial = np.cumsum(1.0 / (sizes[:n] * prices[:n]))
    below = np.flatnonzero(rates[1:] < floor)
    first = int(below[0]) + 1 if below.size else None
    if first is None and tail_rate is not None and tail_rate < floor:
        first = rates.size
    verdict = CassVerdict.SUBOPTIMAL_SIDE if first is not None else CassVerdict.OPTIMAL_SIDE
    return CassReport(verdict=verdict, first_violation=first, partial_sums=partial)


def relabeled_rates(prices) -> np.ndarray:
    """Return ``||p~_t|| / ||p~_{t+1}||`` for consecutive two-period blocks."""
    p = np.asarray(prices, dtype=float)
    blocks = p[: 2 * (p.size // 2)].reshape(-1, 2).sum(axis=1)
    return blocks[:-1] / blocks[1:]
