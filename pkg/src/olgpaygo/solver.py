"""Backward market-clearing solver for the three-period country economy.

Generations ``G_0..G_{m-1}`` are modeled (``m = econ.horizon``); ``G_m`` and
``G_{m+1}`` belong to the full-lifespan tail. Given the tail block
``p_m..p_{m+3}``, the clearing condition of period ``k`` is affine in the
earliest price ``p_{k-2}`` (the old generation's wealth), so the periods
``m+1, m, .., 2`` are solved one after another for ``p_{m-1}, .., p_0``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from . import core
from .core import NUMERIC, EconomySpec, GenerationProfile, PriceSeq
from .exceptions import ContractViolation, NoEquilibriumError, SingularStepError
from .tails import BoundaryPrices, FullLifespanTail, boundary_block


@dataclass(frozen=True)
class EquilibriumCandidate:
    """Outcome of one backward solve.

    ``prices`` holds ``p_0..p_{m+3}``, rescaled so that ``p_0 = 1`` whenever
    ``p_0 > 0``. ``residuals`` are relative market-clearing residuals of
    periods ``2..m+1`` (NaN when some price is non-positive).
    """

    a3: float
    prices: np.ndarray
    rates: np.ndarray
    feasible: bool
    residuals: np.ndarray
    rate_stddev: float

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))

    @property
    def price_seq(self) -> PriceSeq:
        return PriceSeq(self.prices, normalized=True)


@dataclass
class SweepResult:
    candidates: List[EquilibriumCandidate]
    intervals: List[tuple]
    grid_step: float

    @property
    def feasible(self) -> List[EquilibriumCandidate]:
        return [c for c in self.candidates if c.feasible]

    def select(self) -> EquilibriumCandidate:
        return select_min_variance(self.feasible)


def _check_horizon(econ: EconomySpec) -> int:
    m = econ.horizon
    if m != len(econ.gamma) + 1 or m < 2:
        raise ContractViolation("solver needs horizon == len(gamma) + 1 >= 2")
    return m


def generation_sizes(econ: EconomySpec, tail: FullLifespanTail) -> np.ndarray:
    """Effective sizes ``H_t e_t`` (relative to ``G_0``) of ``G_0..G_{m+1}``.

    Growth between the last modeled generation and the first tail generation
    repeats the last factor; the tail then grows at ``tail.alpha``.
    """
    m = _check_horizon(econ)
    growth = list(econ.gamma) + [econ.gamma[-1], tail.alpha]
    return np.concatenate([[1.0], np.cumprod(growth)])[: m + 2]


def economy_generations(econ: EconomySpec, tail: FullLifespanTail) -> List[GenerationProfile]:
    m = _check_horizon(econ)
    sizes = generation_sizes(econ, tail)
    modeled = np.array([1.0, 1.0, econ.phi])
    gens = [GenerationProfile(sizes[t], modeled, econ.theta) for t in range(m)]
    gens += [GenerationProfile(sizes[t], np.ones(3), tail.theta) for t in (m, m + 1)]
    return gens


def _generation_table(econ, tail):
    """Per generation: effective size, theta, old-age share."""
    m = _check_horizon(econ)
    sizes = generation_sizes(econ, tail)
    thetas = np.array([econ.theta] * m + [tail.theta] * 2)
    shares = np.array([econ.phi] * m + [1.0] * 2)
    return sizes, thetas, shares


def backward_prices(econ: EconomySpec, tail: FullLifespanTail, blocks) -> np.ndarray:
    """Vectorized backward solve; ``blocks`` has shape ``(n, 4)``.

    Returns unnormalized prices of shape ``(n, m + 4)``.
    """
    m = _check_horizon(econ)
    sizes, thetas, shares = _generation_table(econ, tail)
    blocks = np.atleast_2d(np.asarray(blocks, dtype=float))
    p = np.zeros((blocks.shape[0], m + 4))
    p[:, m:] = blocks

    def wealth(j):
        return p[:, j] + p[:, j + 1] + shares[j] * p[:, j + 2]

    def cleared(j, age, k):
        # E_j * (x_age - e_age) * p_k for generation j in period k
        w = core.preference_weights(thetas[j])
        endow = (1.0, 1.0, shares[j])[age]
        return sizes[j] * (wealth(j) * w[age] / w.sum() - endow * p[:, k])

    for k in range(m + 1, 1, -1):
        old = k - 2
        others = cleared(k - 1, 1, k) + cleared(k, 0, k)
        w = core.preference_weights(thetas[old])
        coef = sizes[old] * w[2] / w.sum()
        if coef == 0:
            raise SingularStepError(f"vanishing coefficient on p_{old}")
        target = (sizes[old] * shares[old] * p[:, k] - others) / coef
        p[:, old] = target - p[:, old + 1] - shares[old] * p[:, k]
    return p


def _positive(p: np.ndarray) -> np.ndarray:
    first = p[..., :1]
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = p / first
    return (first[..., 0] > 0) & np.all(scaled > NUMERIC.positivity, axis=-1)


def market_residuals(econ: EconomySpec, tail: FullLifespanTail, prices) -> np.ndarray:
    """Excess demand of periods ``2..m+1`` relative to aggregate endowment."""
    m = _check_horizon(econ)
    gens = economy_generations(econ, tail)
    out = np.empty(m)
    for k in range(2, m + 2):
        supply = sum(
            g.size * g.endowment[k - b] for b, g in enumerate(gens) if 0 <= k - b < 3
        )
        out[k - 2] = abs(core.excess_demand(k, prices, gens)) / supply
    return out


def _candidate(econ, tail, a3, raw) -> EquilibriumCandidate:
    m = econ.horizon
    positive = bool(_positive(raw))
    prices = raw / raw[0] if raw[0] > 0 else raw.copy()
    if raw[0] > 0:
        prices[0] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        rates = prices[:-1] / prices[1:]
    if positive:
        residuals = market_residuals(econ, tail, prices)
    else:
        residuals = np.full(m, np.nan)
    feasible = positive and bool(np.all(residuals < NUMERIC.rtol))
    prices.setflags(write=False)
    rates.setflags(write=False)
    residuals.setflags(write=False)
    return EquilibriumCandidate(
        a3=float(a3),
        prices=prices,
        rates=rates,
        feasible=feasible,
        residuals=residuals,
        rate_stddev=float(np.std(rates[: m + 1])),
    )


def backward_solve(econ: EconomySpec, boundary: BoundaryPrices) -> EquilibriumCandidate:
    """Solve the modeled periods backward from one tail boundary block.

    An intermediate non-positive price marks the candidate infeasible; it
    is not an error.
    """
    raw = backward_prices(econ, boundary.tail, boundary.prices[None, :])[0]
    return _candidate(econ, boundary.tail, boundary.a3, raw)


def a3_grid(tail: FullLifespanTail, grid_step: float) -> np.ndarray:
    """Points ``-1 + k * grid_step`` strictly inside the admissible interval."""
    lo, hi = tail.a3_interval
    count = int(np.floor((hi - lo) / grid_step))
    grid = lo + grid_step * np.arange(1, count + 1)
    keep = (grid < hi - NUMERIC.pole_guard) & (np.abs(1 + grid) >= NUMERIC.pole_guard)
    return grid[keep]


def _feasible_at(econ, tail, a3) -> bool:
    raw = backward_prices(econ, tail, boundary_block(tail, [a3]))[0]
    return bool(_positive(raw))


def _refine(econ, tail, inside, outside, tol=1e-7):
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if _feasible_at(econ, tail, mid):
            inside = mid
        else:
            outside = mid
    return inside


def _intervals(econ, tail, grid, mask):
    lo, hi = tail.a3_interval
    intervals = []
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return intervals
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    stops = np.concatenate([idx[breaks], [idx[-1]]])
    for i, j in zip(starts, stops):
        left_out = grid[i - 1] if i > 0 else lo + NUMERIC.pole_guard
        right_out = grid[j + 1] if j + 1 < grid.size else hi - NUMERIC.pole_guard
        intervals.append((float(_refine(econ, tail, grid[i], left_out)),
                          float(_refine(econ, tail, grid[j], right_out))))
    return intervals


def sweep(econ: EconomySpec, tail: FullLifespanTail, grid_step: float = 1e-4,
          jobs: int = 1, chunk: int = 4096) -> SweepResult:
    """Backward-solve every ``a3`` on the grid and collect feasible intervals.

    Grid chunks may be evaluated concurrently; results are assembled in grid
    order so the outcome does not depend on ``jobs``.
    """
    grid = a3_grid(tail, grid_step)
    pieces = [grid[i:i + chunk] for i in range(0, grid.size, chunk)]

    def run(piece):
        return backward_prices(econ, tail, boundary_block(tail, piece))

    if jobs > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raws = list(pool.map(run, pieces))
    else:
        raws = [run(piece) for piece in pieces]
    raw = np.concatenate(raws) if raws else np.zeros((0, econ.horizon + 4))
    candidates = [_candidate(econ, tail, a3, row) for a3, row in zip(grid, raw)]
    mask = np.array([c.feasible for c in candidates], dtype=bool)
    return SweepResult(
        candidates=candidates,
        intervals=_intervals(econ, tail, grid, mask),
        grid_step=grid_step,
    )


def select_min_variance(candidates: Sequence[EquilibriumCandidate]) -> EquilibriumCandidate:
    """Feasible candidate with the smallest rate standard deviation.

    Ties go to the smaller ``|a3|``, then to the smaller ``a3``.
    """
    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        raise NoEquilibriumError("no feasible equilibrium candidate")
    return min(feasible, key=lambda c: (c.rate_stddev, abs(c.a3), c.a3))
