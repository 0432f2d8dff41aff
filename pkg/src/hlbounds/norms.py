"""Hardy--Littlewood exponents and coefficient norms of multilinear forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exponents import as_exponent, is_inf
from .forms import CoeffTensor

__all__ = [
    "ExponentVector",
    "beta",
    "coeff_lq",
    "hl_exponent",
    "mixed_norm",
    "validate_exponents",
]


def hl_exponent(m: int, p):
    """Optimal coefficient exponent rho(p, m) for m-linear forms on l_p.

    ``p/(p-m)`` for ``m < p <= 2m``, ``2mp/(mp+p-2m)`` for ``p >= 2m``
    (both give 2 at p = 2m) and ``2m/(m+1)`` at ``p = inf``.  Rational
    inputs give an exact ``Fraction``.
    """
    m = int(m)
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    p = as_exponent(p)
    if is_inf(p):
        return Fraction(2 * m, m + 1)
    if p <= m:
        raise ValueError(f"need p > m, got p={p}, m={m}")
    if p <= 2 * m:
        return p / (p - m)
    return 2 * m * p / (m * p + p - 2 * m)


def _abs_values(t) -> np.ndarray:
    if isinstance(t, CoeffTensor):
        return np.abs(t._val)
    return np.abs(np.asarray(t, dtype=np.float64)).reshape(-1)


def coeff_lq(t, q) -> float:
    """``(sum |c|^q)^(1/q)`` over all coefficients, ``max |c|`` for q = inf.

    ``t`` may be a :class:`CoeffTensor` or any array of coefficients.
    numpy's pairwise summation keeps the error small on large tensors.
    """
    q = as_exponent(q)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    a = _abs_values(t)
    if a.size == 0:
        return 0.0
    if is_inf(q):
        return float(a.max())
    q = float(q)
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((a / scale) ** q) ** (1.0 / q))


@dataclass(frozen=True)
class ExponentVector:
    """Multiple exponent ``q = (q_1, ..., q_m)``; entries may be ``math.inf``."""

    q: tuple

    def __init__(self, q):
        vals = tuple(as_exponent(v) for v in q)
        if not vals:
            raise ValueError("empty exponent vector")
        for v in vals:
            if not v > 0:
                raise ValueError(f"exponents must be positive, got {v}")
        object.__setattr__(self, "q", vals)

    @property
    def m(self) -> int:
        return len(self.q)

    def __len__(self):
        return len(self.q)

    def __iter__(self):
        return iter(self.q)

    def reciprocal_sum(self):
        return sum((0 if is_inf(v) else 1 / v) for v in self.q)

    @classmethod
    def gbh_alpha_first(cls, m: int, alpha) -> ExponentVector:
        """``(alpha, beta_m, ..., beta_m)``."""
        b = beta(m, alpha)
        return cls((as_exponent(alpha),) + (b,) * (m - 1))

    @classmethod
    def gbh_alpha_last(cls, m: int, alpha) -> ExponentVector:
        """``(beta_m, ..., beta_m, alpha)``."""
        b = beta(m, alpha)
        return cls((b,) * (m - 1) + (as_exponent(alpha),))

    def __str__(self):
        return "(" + ", ".join("inf" if is_inf(v) else str(v) for v in self.q) + ")"


def beta(m: int, alpha):
    """Companion exponent ``beta_m = (2 alpha m - 2 alpha) / (alpha m - 2 + alpha)``.

    Together with ``alpha`` it makes ``(alpha, beta_m, ..., beta_m)`` satisfy
    ``sum 1/q_i = (m+1)/2``.
    """
    a = as_exponent(alpha)
    return (2 * a * m - 2 * a) / (a * m - 2 + a)


def mixed_norm(t, q) -> float:
    """Nested norm with index ``j_m`` innermost (exponent ``q_m``) and ``j_1``
    outermost (exponent ``q_1``).

    ``t`` is a :class:`CoeffTensor` or a dense array.  Entries of ``q`` equal
    to ``inf`` take a max over that index.  The nesting order is exactly the
    axis order of ``t``; reorder with :meth:`CoeffTensor.permute` if needed.
    """
    if not isinstance(t, CoeffTensor):
        t = CoeffTensor.from_dense(t)
    if not isinstance(q, ExponentVector):
        q = ExponentVector(q)
    if len(q) != t.degree:
        raise ValueError(f"exponent vector has length {len(q)}, tensor degree is {t.degree}")
    for v in q:
        if v < 1:
            raise ValueError(f"mixed norm exponents must be >= 1, got {v}")
    if t.nnz == 0:
        return 0.0
    keys = t._idx
    vals = np.abs(t._val)
    scale = vals.max()
    vals = vals / scale
    for level in range(t.degree - 1, -1, -1):
        qi = q.q[level]
        prefix = keys[:, :level]
        if level == 0:
            inv = np.zeros(len(vals), dtype=np.int64)
            ngroups = 1
        else:
            prefix, inv = np.unique(prefix, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            ngroups = len(prefix)
        if is_inf(qi):
            out = np.zeros(ngroups)
            np.maximum.at(out, inv, vals)
        else:
            qf = float(qi)
            out = np.bincount(inv, weights=vals**qf, minlength=ngroups) ** (1.0 / qf)
        keys, vals = prefix, out
    return float(scale * vals[0])


def validate_exponents(q, m: int, p) -> tuple[bool, str]:
    """Check ``q`` against the admissible set for the generalized inequality.

    Every ``q_i`` must lie in ``[p/(p-m), 2]`` (``[1, 2]`` at p = inf) and
    ``sum 1/q_i`` must equal ``(mp+p-2m)/(2p)`` (``(m+1)/2`` at p = inf)
    within 1e-12.  Returns ``(ok, diagnostic)``.
    """
    if not isinstance(q, ExponentVector):
        q = ExponentVector(q)
    p = as_exponent(p)
    if len(q) != m:
        return False, f"length {len(q)} != m = {m}"
    if is_inf(p):
        lo, target = Fraction(1), Fraction(m + 1, 2)
    else:
        if p <= m:
            return False, f"p = {p} must exceed m = {m}"
        lo = p / (p - m)
        target = (m * p + p - 2 * m) / (2 * p)
    for i, v in enumerate(q, start=1):
        if is_inf(v) or not (float(lo) - 1e-12 <= float(v) <= 2 + 1e-12):
            return False, f"q_{i} = {v} outside [{float(lo):.6g}, 2]"
    total = q.reciprocal_sum()
    if not math.isclose(float(total), float(target), rel_tol=0, abs_tol=1e-12):
        return False, f"sum 1/q_i = {float(total):.15g}, expected {float(target):.15g}"
    return True, f"sum 1/q_i = {float(total):.15g}"
