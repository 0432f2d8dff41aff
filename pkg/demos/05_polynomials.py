"""Homogeneous polynomials Q_{2^m} and the coefficient growth of their powers.

Run: python3 demos/05_polynomials.py
"""
# %%
import math

import numpy as np

from hlbounds import check_eq_m, make_Q, poly_coeff_norm, poly_pow
from hlbounds.bounds import poly_lower_bound_root
from hlbounds.polynomials import grid_sup, sup_norm_poly

# %% [markdown]
# Q_2 = x1^2 - x2^2, and each level squares two copies on disjoint blocks
# of variables and subtracts.

# %%
print(make_Q(4).entries)
for d in (2, 4, 8, 16):
    print(f"Q_{d}: {len(make_Q(d))} terms")

# %% [markdown]
# Q_d has sup norm 1 on the unit cube and on every l_p ball with p >= 2.
# It is attained at e_1.

# %%
for d in (2, 4, 8):
    q = make_Q(d)
    print(d, "grid", grid_sup(q), "local search l_inf", round(sup_norm_poly(q, math.inf, starts=8)[0], 8),
          "l_4", round(sup_norm_poly(q, 4, starts=8)[0], 8))

# %% [markdown]
# Powers grow their largest coefficient much faster than the norm.  For Q_2
# the largest coefficient is a central binomial coefficient.

# %%
print([poly_coeff_norm(poly_pow(make_Q(2), n), math.inf) for n in range(1, 11)])
print([math.comb(n, n // 2) for n in range(1, 11)])

# %% [markdown]
# Exact check of |Q_{2^m}^n|_inf >= (2^n/(n+1))^{2^m-1} on all small cases.

# %%
for m in range(1, 5):
    for n in range(1, 17 // 2**m + 1):
        if n * 2**m <= 16:
            r = check_eq_m(m, n)
            print(f"m={m} n={n}: {r['lhs']:>6} >= {r['rhs']:9.3f}  ({r['terms']} terms)")

# %% [markdown]
# Normalized by the degree, the bound tends to 2/(n+1)^{1/n} as m grows.

# %%
for n in (1, 2, 5, 10):
    vals = [poly_lower_bound_root(m, n) for m in (1, 5, 20)]
    print(n, np.round(vals, 6), "limit", round(2 / (n + 1) ** (1 / n), 6))
