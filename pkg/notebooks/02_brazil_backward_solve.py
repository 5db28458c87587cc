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
# # Brazil: tail boundary prices and the backward solve
#
# Six generations are modeled with the published Brazilian growth factors;
# from the seventh on the economy is a stationary tail growing at
# `gamma_4`. The tail's Pareto-optimal prices form a one-parameter family
# indexed by `a3`, and each member fixes the prices from which the modeled
# periods are solved backward.

# %%
import os
from pathlib import Path

import numpy as np

from olgpaygo import data, pipeline, solver, svgplot, tails

OUT = Path(os.environ.get("OLGPAYGO_OUT", "figures"))
OUT.mkdir(parents=True, exist_ok=True)

econ, tail = pipeline.build_economy(data.canonical_gamma("Brazil"))
print(econ)
print(tail, "hypotheses hold:", tail.hypotheses_hold())

# %% [markdown]
# ## The tail family

# %%
lo, hi = tail.a3_interval
print(f"lambda3 = {tail.lambda3:.6f}; admissible a3 in ({lo}, {hi:.4f})")
charts = {}
for a3 in (-0.5, 0.0, 1.0, 2.0):
    rates = tails.tail_rates(tail, a3, 20)
    charts[f"a3={a3:g}"] = (np.arange(rates.size), rates)
    print(f"a3={a3:>5}: first rates {np.round(rates[:4], 4)}")
(OUT / "tail_rates.svg").write_text(
    svgplot.line_chart(charts, title="Tail return rates", xlabel="t", ylabel="r_t"))

# %% [markdown]
# ## Sweeping a3
#
# Most members of the family drive some modeled price negative. The sweep
# keeps the candidates whose prices are all positive and picks the one with
# the least volatile return rates over periods 0 to 6.

# %%
run = pipeline.run(econ, tail, "Brazil")
print("feasible intervals:", [(round(a, 5), round(b, 5)) for a, b in run.result.intervals])
best = run.selected
print(f"selected a3 = {best.a3:.4f}, rate std {best.rate_stddev:.4f}, "
      f"max residual {best.max_residual:.1e}")
print("rates r0..r8:", np.round(best.rates, 4))

# %%
chart = svgplot.line_chart({"Brazil": (np.arange(best.rates.size), best.rates)},
                           title="Minimum-variance return rates", xlabel="t", ylabel="r_t",
                           vline=econ.horizon)
(OUT / "brazil_rates.svg").write_text(chart)

# %% [markdown]
# ## Band edges
#
# At the lower edge the first price blows up; at the upper edge the second
# price reaches zero.

# %%
for a3 in (run.result.intervals[0][0] - 1e-4, run.result.intervals[0][1] + 1e-4):
    cand = solver.backward_solve(econ, tails.boundary_prices(tail, a3))
    print(f"a3={a3:.5f} feasible={cand.feasible}")
