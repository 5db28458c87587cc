# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Pay-as-you-go designs for five countries
#
# For each country the minimum-variance equilibrium is turned into transfers
# per generation. Negative entries are contributions and positive entries
# are benefits; each generation's transfers have zero present value, and
# the transfers of the generations alive in a period cancel out.

# %%
import os
from pathlib import Path

import numpy as np

from olgpaygo import data, pipeline, svgplot

OUT = Path(os.environ.get("OLGPAYGO_OUT", "figures"))
OUT.mkdir(parents=True, exist_ok=True)

runs = {}
for country in data.COUNTRIES:
    econ, tail = pipeline.build_economy(data.canonical_gamma(country))
    runs[country] = pipeline.run(econ, tail, country)

# %% [markdown]
# ## Equilibria

# %%
for country, run in runs.items():
    s = run.selected
    lo, hi = run.result.intervals[0]
    corr = pipeline.rate_gamma_correlation(s, run.econ.gamma)
    print(f"{country:<7} band [{lo:+.4f}, {hi:+.4f}] a3={s.a3:+.4f} "
          f"corr(r, gamma)={corr:.2f} cass: {run.cass.verdict.value}")

# %% [markdown]
# ## Designs
#
# Transfers are in units of generation 0's endowment; `paid` is the share
# of first-period income contributed.

# %%
for country, run in runs.items():
    d = run.design
    print(country)
    print("  gen   young     middle    old       paid")
    for t in range(d.generations):
        s1, s2, s3 = d.savings[t]
        print(f"  {t}   {s1:+9.3f} {s2:+9.3f} {s3:+9.3f}  {d.contribution_paid[t]:.3f}")
    print(f"  max balance residual {np.nanmax(np.abs(d.balance_residuals)):.1e}")

# %% [markdown]
# ## Rates against endowment growth

# %%
charts = {}
for country, run in runs.items():
    n = run.econ.horizon + 1
    charts[f"{country} r"] = (np.arange(n), run.selected.rates[:n])
    charts[f"{country} gamma"] = (np.arange(n), pipeline.gamma_overlay(run.econ.gamma, n))
(OUT / "rates_vs_gamma.svg").write_text(
    svgplot.line_chart(charts, title="Return rates and growth", xlabel="t"))
