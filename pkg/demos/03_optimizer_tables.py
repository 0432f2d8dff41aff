"""Norms on l_p by multi-start alternating maximization, and the two tables
of numeric lower bounds built from them.

Run: python3 demos/03_optimizer_tables.py      (about half a minute)
"""
# %%
import math

import numpy as np

from hlbounds import (
    OptimizeConfig,
    alternating_ascent,
    bound_numeric,
    brute_force_linf_norm,
    clarkson_sup,
    make_littlewood,
    make_tilde,
    sup_norm,
)

# %% [markdown]
# One ascent run: each step maximizes over a single slot in closed form, so
# the objective can only go up.

# %%
T4 = make_littlewood(4)
rng = np.random.default_rng(1)
run = alternating_ascent(T4, OptimizeConfig(p=8), [rng.standard_normal(n) for n in T4.slot_dims])
print("trace:", np.round(run.trace[:12], 4), "...", run.value, f"({run.sweeps} sweeps)")

# %% [markdown]
# Cross-checks.  For T_2 the norm is a one-variable maximization.  At p = inf
# corner enumeration is exact.

# %%
for p in (4, 8, 16):
    res = sup_norm(make_littlewood(2), OptimizeConfig(p=p, starts=64))
    print(f"p={p}: ascent {res.best_value:.10f}  clarkson {clarkson_sup(p):.10f}")
for m in (2, 3, 4):
    res = sup_norm(make_littlewood(m), OptimizeConfig(p=math.inf, starts=64))
    print(f"T_{m} on l_inf: ascent {res.best_value}  corners {brute_force_linf_norm(make_littlewood(m))}")

# %% [markdown]
# T_m on l_{2m}.  The numerator is the l_2 coefficient norm 2^{m-1}.  The
# certified column divides by the rigorous upper bound 2^{m-2}||T_2||
# instead of the multi-start estimate.

# %%
print(" m   norm        bound    certified")
for m in range(2, 10):
    expr = make_littlewood(m)
    res = sup_norm(expr, OptimizeConfig(p=2 * m, starts=128))
    rec = bound_numeric(expr, m, 2 * m, res, family="littlewood")
    print(f"{m:2d}  {rec.norm:10.4f}  {rec.bound:.4f}   {rec.certified_bound:.4f}")

# %% [markdown]
# The tilde family gives larger bounds at m = 4, 8, 16.  The 16-linear
# form lives on 256 coordinates and is never expanded.

# %%
for m, starts in ((4, 128), (8, 128), (16, 500)):
    expr = make_tilde(m)
    res = sup_norm(expr, OptimizeConfig(p=2 * m, starts=starts))
    rec = bound_numeric(expr, m, 2 * m, res, family="tilde")
    print(f"tilde T_{m} on l_{2 * m}: norm {rec.norm:.4f}, bound {rec.numerator:.0f}/{rec.norm:.2f} = {rec.bound:.4f}")
