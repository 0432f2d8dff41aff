"""Closed-form lower bounds: Clarkson-type, the m < p < 2m regime, and the
generalized Bohnenblust--Hille constants with mixed exponents.

Run: python3 demos/04_bounds_gbh.py
"""
# %%
import math
from fractions import Fraction as F

import numpy as np

from hlbounds import (
    bound_clarkson,
    bound_dimant,
    bound_gbh_jfapel,
    bound_gbh_thispel,
    bound_old,
    clarkson_sup,
    verify_three_linear_optimal,
)
from hlbounds.optimizer import clarkson_function

# %% [markdown]
# The norm of T_2 on l_p is the max of a one-variable function on [0, 1].
# For p > 2 the max sits in the interior.

# %%
xs = np.linspace(0, 1, 6)
for p in (2, 4, 8):
    print(p, np.round(clarkson_function(xs, p), 5), "sup", round(clarkson_sup(p), 6))

# %% [markdown]
# Bounds for p >= 2m, compared with the older formula.

# %%
for m in (2, 3, 4):
    for p in (2 * m, 4 * m, 16 * m):
        new = bound_clarkson(m, p).bound
        old = bound_old(m, p) if p > 2 * m else float("nan")
        print(f"m={m} p={p:3d}: new {new:.4f}  old {old:.4f}")
for base, k in ((F(9, 10), 19), (F(99, 100), 199)):
    p = 1 + math.log(1 / k) / math.log(base)
    print(f"p = {p:.4f}: {bound_clarkson(2, p).bound:.4f}")

# %% [markdown]
# For m < p < 2m the same construction gives a formula whose value can
# drop below 1.  Note that x = 1 is not where the sup is attained.

# %%
for m, p in ((2, F(7, 2)), (3, F(28, 5)), (100, F(199999, 1000))):
    r = bound_dimant(m, p)
    print(f"m={m} p={p}: {r.numerator:.5f} / {r.norm:.5f} = {r.bound:.5f}"
          f"   (value at x=1: {float(clarkson_function(1.0, p)):.5f})")

# %% [markdown]
# Mixed exponents at p = inf.  The two formulas cross at alpha = 2m/(m+1)
# and coincide identically for bilinear forms.

# %%
for m in (2, 3, 5):
    crit = F(2 * m, m + 1)
    for a in (1, crit, 2):
        print(f"m={m} alpha={str(a):>4}: thispel {bound_gbh_thispel(m, a).bound:.5f}"
              f"  jfapel {bound_gbh_jfapel(m, a).bound:.5f}")

# %% [markdown]
# For m = 3 three exponent vectors reach the known upper constant 2^{3/4}.

# %%
for row in verify_three_linear_optimal():
    print(row["q"], row["mechanism"], row["lower"], "PASS" if row["passed"] else "FAIL")
