"""Country-level orchestration: data -> sweep -> selection -> design."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import data
from .core import EconomySpec
from .design import CassReport, PaygoDesign, build_design, cass_diagnostic
from .solver import EquilibriumCandidate, SweepResult, generation_sizes, sweep
from .tails import FullLifespanTail, bridged_relabel_growth, theta_lower_bound

DEFAULT_THETA = 2.82
DEFAULT_PHI = 0.2


@dataclass(frozen=True)
class CountryRun:
    label: str
    econ: EconomySpec
    tail: FullLifespanTail
    result: SweepResult
    selected: Optional[EquilibriumCandidate]
    design: Optional[PaygoDesign]
    cass: Optional[CassReport]


def country_series(country: str, source: str = "canonical", path=None):
    """``(alpha, gamma)`` for a country from the canonical or the raw data path."""
    if source == "canonical" and path is None:
        return data.canonical_alpha(country), data.canonical_gamma(country)
    cs = data.load_country(country, path)
    return cs.alpha, cs.gamma


def build_economy(gamma: Sequence[float], theta: float = DEFAULT_THETA,
                  theta_tau: Optional[float] = None, phi: float = DEFAULT_PHI,
                  alpha_tau: Optional[float] = None, alpha=None):
    econ = EconomySpec(gamma=tuple(gamma), theta=theta, phi=phi, alpha=alpha)
    tail = FullLifespanTail(
        alpha=econ.gamma[-1] if alpha_tau is None else alpha_tau,
        theta=theta if theta_tau is None else theta_tau,
    )
    return econ, tail


def run(econ: EconomySpec, tail: FullLifespanTail, label: str = "custom",
        grid_step: float = 1e-4, jobs: int = 1) -> CountryRun:
    result = sweep(econ, tail, grid_step=grid_step, jobs=jobs)
    if not result.feasible:
        return CountryRun(label, econ, tail, result, None, None, None)
    selected = result.select()
    design = build_design(selected, econ, tail)
    sizes = generation_sizes(econ, tail)
    cass = cass_diagnostic(selected.rates, sizes, min(tail.alpha, min(econ.gamma)),
                           tail_rate=tail.alpha)
    return CountryRun(label, econ, tail, result, selected, design, cass)


def theta_bounds(country: str, phi: float = DEFAULT_PHI, source: str = "canonical",
                 path=None) -> list:
    """Lower bounds on theta per relabeled period ``t = 0, 1, 2``.

    The last relabeled period bridges into the tail with the tail growth
    tied to the last demographic factor, so its growth is ``alpha_4**2``.
    """
    alpha, gamma = country_series(country, source, path)
    alpha_tilde = bridged_relabel_growth(alpha)
    return [theta_lower_bound(phi, a, gamma[2 * t]) for t, a in enumerate(alpha_tilde)]


def gamma_overlay(gamma: Sequence[float], n: int) -> np.ndarray:
    """``gamma_t`` for ``t < n``, holding the last value beyond the data."""
    gamma = list(gamma)
    return np.array(gamma[:n] + [gamma[-1]] * max(0, n - len(gamma)))


def rate_gamma_correlation(candidate: EquilibriumCandidate, gamma, periods: int = 7) -> float:
    rates = np.asarray(candidate.rates[:periods])
    return float(np.corrcoef(rates, gamma_overlay(gamma, periods))[0, 1])
