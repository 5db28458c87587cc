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
# # Backward calculation in a two-period economy
#
# Households live two periods, are endowed with one unit when young and
# value consumption with square-root utility. In return-rate space the
# monetary equilibrium condition reads `alpha_t phi(r_{t+1}) = r_t phi(r_t)`,
# so a rate far in the future can be mapped back to `r_1` one step at a time.

# %%
import numpy as np

from olgpaygo import simple
from olgpaygo.exceptions import InfeasibleRateError

# %% [markdown]
# ## Convergence from arbitrary seeds
#
# With constant growth the composed backward maps forget the seed: every
# starting guess ends at the growth factor itself.

# %%
for alpha in (0.5, 1.0, 2.0):
    for seed in (0.1, 1.0, 10.0):
        conv = simple.solve_first_rate(alpha, seed)
        print(f"alpha={alpha:<4} seed={seed:<5} r1={conv.rate:.12f} depth={conv.depth:>3}")

# %% [markdown]
# The trace shows how fast the seed is forgotten.

# %%
trace = simple.solve_first_rate(2.0, 10.0).trace
print(np.round(trace[:8], 6))

# %% [markdown]
# ## How far ahead does the future matter?
#
# The derivative of the optimal first rate with respect to growth `t`
# periods ahead decays geometrically. The closed form is compared with a
# central finite difference of the backward map.

# %%
alpha = 2.0
print(" t   formula        finite diff    rel err")
for t in range(1, 7):
    exact = simple.sensitivity(alpha, t)
    fd = simple.finite_difference_sensitivity(alpha, t)
    print(f"{t:>2}   {exact:.8f}   {fd:.8f}   {abs(fd - exact) / exact:.1e}")

# %% [markdown]
# ## Overshooting the optimal rate
#
# Running the market-clearing condition forward from a first rate above the
# optimum eventually asks for a rate outside the range of `phi`.

# %%
print(simple.equilibrium_path(2.0, 2.0, 6))
try:
    simple.equilibrium_path(2.2, 2.0, 60)
except InfeasibleRateError as exc:
    print("r1 = 2.2:", exc)
