"""Homogeneous polynomials with exact integer coefficients.

Used for the family ``Q_2 = x_1^2 - x_2^2``,
``Q_{2d}(x) = Q_d(x_1..x_d)^2 - Q_d(x_{d+1}..x_{2d})^2`` and its powers.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict

import numpy as np

from ._exponents import as_exponent, is_inf

__all__ = [
    "DEFAULT_TERM_CAP",
    "Polynomial",
    "check_eq_m",
    "grid_sup",
    "make_Q",
    "poly_coeff_norm",
    "poly_pow",
    "sup_norm_poly",
]

DEFAULT_TERM_CAP = 10**6


class Polynomial:
    """m-homogeneous polynomial ``sum_alpha a_alpha x^alpha`` in ``nvars`` variables.

    ``entries`` maps exponent tuples (length ``nvars``, sum ``degree``) to
    nonzero coefficients; integer coefficients stay Python ints.
    """

    __slots__ = ("nvars", "degree", "entries")

    def __init__(self, nvars: int, degree: int, entries=None):
        self.nvars = int(nvars)
        self.degree = int(degree)
        clean = {}
        for alpha, c in (entries or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.nvars or min(alpha) < 0:
                raise ValueError(f"bad multi-index {alpha} for {self.nvars} variables")
            if sum(alpha) != self.degree:
                raise ValueError(f"multi-index {alpha} is not of degree {self.degree}")
            if c != 0:
                clean[alpha] = c
        self.entries = dict(sorted(clean.items()))

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.nvars, self.degree, self.entries) == (other.nvars, other.degree, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"Polynomial(nvars={self.nvars}, degree={self.degree}, terms={len(self)})"

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Value at ``x``; a 2-D ``x`` of shape ``(B, nvars)`` gives ``(B,)``."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {x.shape[-1]}")
        if not self.entries:
            return np.zeros(x.shape[:-1]) if x.ndim > 1 else 0.0
        alphas = np.array(list(self.entries), dtype=np.float64)
        coeffs = np.array([float(c) for c in self.entries.values()])
        mons = np.prod(x[..., None, :] ** alphas, axis=-1)
        out = mons @ coeffs
        return out if x.ndim > 1 else float(out)

    def embed(self, nvars: int, offset: int = 0) -> Polynomial:
        """Same polynomial on variables ``offset+1 .. offset+self.nvars`` of ``nvars``."""
        if offset < 0 or offset + self.nvars > nvars:
            raise ValueError("embedding does not fit")
        pad_l, pad_r = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return Polynomial(nvars, self.degree, {pad_l + a + pad_r: c for a, c in self.entries.items()})

    def __mul__(self, other: Polynomial) -> Polynomial:
        return _mul(self, other, DEFAULT_TERM_CAP)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + other.scale(-1)

    def __add__(self, other: Polynomial) -> Polynomial:
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise ValueError("polynomials differ in variables or degree")
        acc = defaultdict(int, self.entries)
        for a, c in other.entries.items():
            acc[a] += c
        return Polynomial(self.nvars, self.degree, acc)

    def scale(self, k) -> Polynomial:
        return Polynomial(self.nvars, self.degree, {a: k * c for a, c in self.entries.items()})

    def to_json(self) -> str:
        return json.dumps({
            "nvars": self.nvars,
            "degree": self.degree,
            "entries": [{"alpha": list(a), "c": c} for a, c in self.entries.items()],
        })

    @classmethod
    def from_json(cls, text: str) -> Polynomial:
        d = json.loads(text)
        return cls(d["nvars"], d["degree"], {tuple(e["alpha"]): e["c"] for e in d["entries"]})


def _mul(p: Polynomial, q: Polynomial, cap: int) -> Polynomial:
    if p.nvars != q.nvars:
        raise ValueError("polynomials live in different numbers of variables")
    acc = defaultdict(int)
    for a, ca in p.entries.items():
        for b, cb in q.entries.items():
            acc[tuple(x + y for x, y in zip(a, b))] += ca * cb
        if len(acc) > cap:
            raise ValueError(f"product exceeds the cap of {cap} terms")
    out = Polynomial(p.nvars, p.degree + q.degree, acc)
    if len(out) > cap:
        raise ValueError(f"product exceeds the cap of {cap} terms")
    return out


def make_Q(d: int) -> Polynomial:
    """Degree-``d`` polynomial ``Q_d`` in ``d`` variables (``d`` a power of two)."""
    d = int(d)
    if d < 2 or d & (d - 1):
        raise ValueError(f"d must be a power of two >= 2, got {d}")
    if d == 2:
        return Polynomial(2, 2, {(2, 0): 1, (0, 2): -1})
    half = make_Q(d // 2)
    lo = half.embed(d, 0)
    hi = half.embed(d, d // 2)
    return lo * lo - hi * hi


def poly_pow(p: Polynomial, n: int, cap: int = DEFAULT_TERM_CAP) -> Polynomial:
    """Exact ``p^n`` by repeated squaring; raises once a product passes ``cap`` terms."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    result = None
    base = p
    while n:
        if n & 1:
            result = base if result is None else _mul(result, base, cap)
        n >>= 1
        if n:
            base = _mul(base, base, cap)
    return result


def poly_coeff_norm(p: Polynomial, q) -> float:
    """``|P|_q = (sum |a_alpha|^q)^{1/q}``; ``max |a_alpha|`` at q = inf."""
    q = as_exponent(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    if not p.entries:
        return 0.0
    if is_inf(q):
        return float(max(abs(c) for c in p.entries.values()))
    a = np.abs(np.array([float(c) for c in p.entries.values()]))
    s = a.max()
    return float(s * np.sum((a / s) ** float(q)) ** (1 / float(q)))


def check_eq_m(m: int, n: int, cap: int = DEFAULT_TERM_CAP) -> dict:
    """Compare ``|Q_{2^m}^n|_inf`` (exact expansion) with ``(2^n/(n+1))^{2^m-1}``."""
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    qn = poly_pow(make_Q(2**m), n, cap)
    lhs = max(abs(c) for c in qn.entries.values())
    rhs = (2.0**n / (n + 1)) ** (2**m - 1)
    return {"m": m, "n": n, "lhs": lhs, "rhs": rhs, "terms": len(qn), "holds": lhs >= rhs}


def grid_sup(p: Polynomial, levels=(-1.0, 0.0, 1.0)) -> float:
    """``max |P|`` over the grid ``levels^nvars`` (a lower estimate of the l_inf norm)."""
    pts = np.array(list(itertools.product(levels, repeat=p.nvars)))
    return float(np.abs(p.evaluate(pts)).max())


def sup_norm_poly(p: Polynomial, lp, starts: int = 32, seed: int = 0) -> tuple[float, np.ndarray]:
    """Multi-start local maximisation of ``|P(x)|`` on the unit sphere of l_p.

    Parametrises ``x = y / ||y||_p`` and runs L-BFGS-B on ``-P(x)^2``.
    Returns ``(best value, maximiser)``.
    """
    from scipy.optimize import minimize

    lp = as_exponent(lp)
    rng = np.random.default_rng(seed)

    def to_sphere(y):
        if is_inf(lp):
            nrm = np.abs(y).max()
        else:
            nrm = np.sum(np.abs(y) ** float(lp)) ** (1 / float(lp))
        return y / nrm

    def obj(y):
        return -p.evaluate(to_sphere(y)) ** 2

    best, arg = -math.inf, None
    for _ in range(starts):
        y0 = rng.standard_normal(p.nvars)
        res = minimize(obj, y0, method="L-BFGS-B")
        x = to_sphere(res.x)
        val = abs(p.evaluate(x))
        if val > best:
            best, arg = val, x
    return best, arg
