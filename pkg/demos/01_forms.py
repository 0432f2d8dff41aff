"""Building the two families of multilinear forms and looking inside them.

Run: python3 demos/01_forms.py
"""
# %%
import numpy as np

from hlbounds import evaluate, expand_coeffs, make_littlewood, make_tilde, slot_coefficients
from hlbounds.forms import unit_count

# %% [markdown]
# The bilinear seed is the 2x2 Hadamard-type matrix.  Every larger form in
# both families is a signed sum of products of copies of it.

# %%
T2 = make_littlewood(2)
print(expand_coeffs(T2).to_dense())

# %% [markdown]
# T_m doubles the first slots at each level and adds a 2-dimensional slot
# for the new variable.  Slot dimensions and coefficient counts:

# %%
for m in range(2, 7):
    T = make_littlewood(m)
    print(f"T_{m}: slot dims {T.slot_dims}, nonzeros {unit_count(T)} = 4^{m - 1}")

# %% [markdown]
# Expanding T_3 recovers the sixteen +-1 coefficients.  Listing the support
# shows the two blocks, weighted by (z1 + z2) and (z1 - z2).

# %%
t3 = expand_coeffs(make_littlewood(3))
for idx, c in t3.entries.items():
    print(idx, int(c))

# %% [markdown]
# The tilde family multiplies two copies on disjoint slots and uses backward
# shifts.  Its size explodes: the 16-linear member has 2^30 coefficients,
# yet it evaluates in milliseconds because nothing is expanded.

# %%
for m in (2, 4, 8, 16):
    print(f"tilde T_{m}: slot dims {make_tilde(m).slot_dims[0]}, nonzeros {unit_count(make_tilde(m))}")

rng = np.random.default_rng(0)
T16 = make_tilde(16)
args = [rng.standard_normal(n) for n in T16.slot_dims]
print("tilde T_16 at a random point:", evaluate(T16, args))

# %% [markdown]
# Same coefficient count, different forms: tilde T_4 and T_4.

# %%
a, b = expand_coeffs(make_tilde(4)), expand_coeffs(make_littlewood(4))
print("nnz", a.nnz, b.nnz, "equal:", a == b)

# %% [markdown]
# The partial linear form at one slot is what the optimizer consumes.  Its
# inner product with the slot argument reproduces the full value.

# %%
c = slot_coefficients(T16, args, 5)
print(np.dot(c, args[4]), evaluate(T16, args))
