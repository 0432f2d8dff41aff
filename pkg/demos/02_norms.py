"""Summability exponents and mixed coefficient norms.

Run: python3 demos/02_norms.py
"""
# %%
import math
from fractions import Fraction as F

from hlbounds import ExponentVector, coeff_lq, expand_coeffs, hl_exponent, make_littlewood, mixed_norm
from hlbounds.norms import beta, validate_exponents

# %% [markdown]
# The optimal exponent rho(p, m) has two regimes that meet at p = 2m, where
# it equals 2.  At p = inf it reduces to 2m/(m+1).

# %%
for m in (2, 3, 4):
    row = [hl_exponent(m, p) for p in (F(3 * m, 2), 2 * m, 4 * m, math.inf)]
    print(m, [str(r) for r in row])

# %% [markdown]
# With all coefficients +-1, the l_rho coefficient norm is N^{1/rho}.  At
# p = 2m this is 2^{m-1} for T_m.

# %%
for m in range(2, 7):
    t = expand_coeffs(make_littlewood(m))
    print(m, coeff_lq(t, hl_exponent(m, 2 * m)), 2 ** (m - 1))

# %% [markdown]
# Mixed norms nest the sums.  The last index is innermost.  On T_3 the
# orderings (4/3, 2, 4/3) and (4/3, 4/3, 2) both give 2^{11/4}, but moving
# the 2 to the front changes the value.

# %%
t3 = expand_coeffs(make_littlewood(3))
for q in [(F(4, 3), 2, F(4, 3)), (F(4, 3), F(4, 3), 2), (2, F(4, 3), F(4, 3))]:
    print(ExponentVector(q), mixed_norm(t3, q))
print("2^(11/4) =", 2 ** 2.75)

# %% [markdown]
# Admissible exponent vectors at p = inf have entries in [1, 2] and
# reciprocal sum (m+1)/2.  The companion exponent beta_m completes alpha.

# %%
for alpha in (1, F(4, 3), F(3, 2), 2):
    q = ExponentVector.gbh_alpha_last(3, alpha)
    print(f"alpha={alpha}: beta_3={beta(3, alpha)}, q={q}, valid={validate_exponents(q, 3, math.inf)[0]}")
print(validate_exponents((1, 1, 1), 3, math.inf))
