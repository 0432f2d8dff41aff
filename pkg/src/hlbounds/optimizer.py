"""Norms of multilinear forms on products of l_p unit balls.

``sup_norm`` runs many independent alternating-maximization ascents.  Each
ascent cycles through the slots; with all other arguments fixed the form is
a linear functional ``<c, x>`` in the remaining argument, maximised in closed
form on the l_p ball (:func:`dual_argmax`).  The objective never decreases and
every iterate is feasible, so the reported value is always a valid lower
estimate of the norm.

All starts are advanced together as one numpy batch.  Each start draws its
random numbers from its own generator seeded by ``(master_seed, index)``, so
results do not depend on how the starts are grouped.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._exponents import as_exponent, conjugate, is_inf
from .forms import FormExpr, FormTooLargeError, _bind, _root_window, _Walker, expand_coeffs

__all__ = [
    "AscentRun",
    "OptimizeConfig",
    "OptimizeResult",
    "alternating_ascent",
    "brute_force_linf_norm",
    "clarkson_function",
    "clarkson_sup",
    "dual_argmax",
    "lp_norm",
    "random_start",
    "sup_norm",
]

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0x484C2015
MAX_RESTARTS = 3
BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class OptimizeConfig:
    p: object = math.inf
    starts: int = 64
    master_seed: int = DEFAULT_SEED
    sweep_tol: float = 1e-10
    max_sweeps: int = 500
    batch_size: int = 256

    def __post_init__(self):
        p = as_exponent(self.p)
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
        object.__setattr__(self, "p", p)
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if not self.sweep_tol > 0:
            raise ValueError("sweep_tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class OptimizeResult:
    best_value: float
    witness: list
    per_start: list
    converged_fraction: float
    config: OptimizeConfig = field(repr=False)
    best_start: int = 0

    def to_dict(self) -> dict:
        return {
            "best": self.best_value,
            "witness": [w.tolist() for w in self.witness],
            "starts": self.config.starts,
            "seed": self.config.master_seed,
            "p": str(self.config.p) if not is_inf(self.config.p) else "inf",
            "sweep_tol": self.config.sweep_tol,
            "max_sweeps": self.config.max_sweeps,
            "best_start": self.best_start,
            "converged_fraction": self.converged_fraction,
            "per_start": self.per_start,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> OptimizeResult:
        config = OptimizeConfig(
            p=d["p"], starts=d["starts"], master_seed=d["seed"],
            sweep_tol=d["sweep_tol"], max_sweeps=d["max_sweeps"],
        )
        return cls(
            best_value=d["best"],
            witness=[np.asarray(w) for w in d["witness"]],
            per_start=d["per_start"],
            converged_fraction=d["converged_fraction"],
            config=config,
            best_start=d.get("best_start", 0),
        )


@dataclass
class AscentRun:
    value: float
    witness: list
    sweeps: int
    trace: list
    converged: bool
    restarts: int = 0


def lp_norm(x, p, axis=-1):
    p = as_exponent(p)
    a = np.abs(np.asarray(x, dtype=np.float64))
    if is_inf(p):
        return a.max(axis=axis)
    if p == 1:
        return a.sum(axis=axis)
    scale = a.max(axis=axis, keepdims=True)
    safe = np.where(scale == 0, 1.0, scale)
    pf = float(p)
    return np.squeeze(safe, axis=axis) * np.sum((a / safe) ** pf, axis=axis) ** (1.0 / pf)


def _dual_argmax_batch(c: np.ndarray, p):
    """Row-wise maximiser of ``<c, x>`` over the l_p ball; returns (x, value)."""
    b, n = c.shape
    if is_inf(p):
        x = np.where(c < 0, -1.0, 1.0)
        return x, np.abs(c).sum(axis=1)
    if p == 1:
        a = np.abs(c)
        j = np.argmax(a, axis=1)
        x = np.zeros_like(c)
        rows = np.arange(b)
        x[rows, j] = np.where(c[rows, j] < 0, -1.0, 1.0)
        return x, a[rows, j]
    q = float(conjugate(p))
    a = np.abs(c)
    scale = a.max(axis=1, keepdims=True)
    u = a / scale
    x = np.sign(c) * u ** (q - 1.0)
    x /= lp_norm(x, p)[:, None]
    value = scale[:, 0] * np.sum(u**q, axis=1) ** (1.0 / q)
    return x, value


def dual_argmax(c, p):
    """Maximiser of the linear functional ``<c, .>`` on the unit ball of l_p.

    Returns ``(x, value)`` with ``value = ||c||_{p*}``.  At ``p = inf``,
    ``x = sign(c)`` with ``sign(0) = +1``; at ``p = 1`` all mass sits on the
    lowest-index coordinate of maximal ``|c_i|``.
    """
    p = as_exponent(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1:
        raise ValueError("c must be a vector")
    if not np.any(c):
        raise ValueError("zero functional has no unique maximiser")
    x, v = _dual_argmax_batch(c[None, :], p)
    return x[0], float(v[0])


def random_start(rng: np.random.Generator, dims, p) -> list[np.ndarray]:
    """Cubed standard normals, normalised to unit l_p norm per slot."""
    out = []
    for n in dims:
        while True:
            z = rng.standard_normal(n) ** 3
            if np.any(z):
                break
        out.append(z / lp_norm(z, p))
    return out


def _start_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(master_seed) & (2**64 - 1), int(index)])


def _ascend(expr: FormExpr, starts: list[list[np.ndarray]], p, sweep_tol, max_sweeps,
            rngs=None, keep_trace=False):
    """Batched alternating ascent from ``starts`` (list of per-start arg lists)."""
    slots = expr.slots
    b = len(starts)
    xs = {s: np.stack([st[i] for st in starts]) for i, s in enumerate(slots)}
    win = _root_window(expr)
    current = _Walker(xs).value(expr, win)
    prev = current.copy()
    sweeps = np.zeros(b, dtype=np.int64)
    converged = np.zeros(b, dtype=bool)
    dead = np.zeros(b, dtype=bool)
    restarts = np.zeros(b, dtype=np.int64)
    traces = [[float(v)] for v in current] if keep_trace else None
    active = np.arange(b)

    for _ in range(max_sweeps):
        if active.size == 0:
            break
        for k in slots:
            if active.size == 0:
                break
            sub = {s: xs[s][active] for s in slots}
            c = _Walker(sub).coeffs(expr, win, k)
            zero = ~np.any(c, axis=1)
            if zero.any():
                active = _handle_degenerate(expr, xs, active, zero, p, rngs, restarts, dead,
                                            current, prev, sweeps, traces)
                sub = {s: xs[s][active] for s in slots}
                if active.size == 0:
                    break
                c = _Walker(sub).coeffs(expr, win, k)
                zero = ~np.any(c, axis=1)
                if zero.any():
                    # fresh starts that are still degenerate wait for the next slot
                    keep = active[~zero]
                    c = c[~zero]
                else:
                    keep = active
            else:
                keep = active
            if keep.size == 0:
                continue
            x_new, val = _dual_argmax_batch(c, p)
            xs[k][keep] = x_new
            current[keep] = val
            if traces is not None:
                for r, v in zip(keep, val):
                    traces[r].append(float(v))
        sweeps[active] += 1
        cur, old = current[active], prev[active]
        done = (cur - old) <= sweep_tol * np.maximum(np.abs(old), 1e-300)
        converged[active[done]] = True
        prev[active] = cur
        active = active[~done]

    witness = [[xs[s][r].copy() for s in slots] for r in range(b)]
    return current, witness, sweeps, converged, restarts, dead, traces


def _handle_degenerate(expr, xs, active, zero, p, rngs, restarts, dead, current, prev, sweeps, traces):
    rows = active[zero]
    for r in rows:
        if rngs is None or restarts[r] >= MAX_RESTARTS:
            dead[r] = True
            continue
        restarts[r] += 1
        fresh = random_start(rngs[r], expr.slot_dims, p)
        for s, v in zip(expr.slots, fresh):
            xs[s][r] = v
        val = _Walker({s: xs[s][r:r + 1] for s in expr.slots}).value(expr, _root_window(expr))[0]
        current[r] = val
        prev[r] = val
        sweeps[r] = 0
        if traces is not None:
            traces[r].append(float(val))
    # c = 0 means the form vanishes at the frozen arguments
    current[rows[dead[rows]]] = 0.0
    return active[~dead[active]]


def alternating_ascent(expr: FormExpr, config: OptimizeConfig, start, rng=None) -> AscentRun:
    """One alternating-maximization run from ``start`` (one vector per slot).

    Start vectors are rescaled to unit l_p norm.  The returned ``trace`` holds
    the objective at the start and after every slot update.
    """
    p = config.p
    bound, batched = _bind(expr, start)
    if batched:
        raise ValueError("alternating_ascent takes a single start; use sup_norm for batches")
    vecs = []
    for s in expr.slots:
        x = bound[s][0]
        nrm = lp_norm(x, p)
        if nrm == 0:
            raise ValueError(f"start vector for slot {s} is zero")
        vecs.append(x / nrm)
    rngs = [rng if rng is not None else np.random.default_rng(config.master_seed)]
    cur, wit, sw, conv, rs, dead, traces = _ascend(
        expr, [vecs], p, config.sweep_tol, config.max_sweeps, rngs=rngs, keep_trace=True
    )
    return AscentRun(float(cur[0]), wit[0], int(sw[0]), traces[0], bool(conv[0]), int(rs[0]))


def sup_norm(expr: FormExpr, config: OptimizeConfig) -> OptimizeResult:
    """Multi-start estimate of ``sup |T(x^1, ..., x^m)|`` over unit l_p balls."""
    p = config.p
    values = np.empty(config.starts)
    witnesses = [None] * config.starts
    per_start = []
    n_conv = 0
    for lo in range(0, config.starts, config.batch_size):
        idx = range(lo, min(config.starts, lo + config.batch_size))
        rngs = [_start_rng(config.master_seed, i) for i in idx]
        starts = [random_start(r, expr.slot_dims, p) for r in rngs]
        cur, wit, sw, conv, rs, dead, _ = _ascend(
            expr, starts, p, config.sweep_tol, config.max_sweeps, rngs=rngs
        )
        for j, i in enumerate(idx):
            values[i] = cur[j]
            witnesses[i] = wit[j]
            per_start.append({
                "start": i,
                "value": float(cur[j]),
                "sweeps": int(sw[j]),
                "converged": bool(conv[j]),
                "restarts": int(rs[j]),
                "degenerate": bool(dead[j]),
            })
            n_conv += bool(conv[j])
        logger.debug("starts %d..%d done, best so far %.10g", idx[0], idx[-1], values[: idx[-1] + 1].max())
    best = int(np.argmax(values))
    return OptimizeResult(
        best_value=float(values[best]),
        witness=witnesses[best],
        per_start=per_start,
        converged_fraction=n_conv / config.starts,
        config=config,
        best_start=best,
    )


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def clarkson_function(x, p):
    """``((1+x)^{p*} + (1-x)^{p*})^{1/p*} / (1 + x^p)^{1/p}`` on [0, 1]."""
    p = as_exponent(p)
    x = np.asarray(x, dtype=np.float64)
    if is_inf(p):
        return np.full_like(x, 2.0) / np.maximum(1.0, x)
    q = float(conjugate(p))
    pf = float(p)
    num = ((1 + x) ** q + (1 - x) ** q) ** (1 / q)
    return num / (1 + x**pf) ** (1 / pf)


def clarkson_sup(p, grid: int = 1024, tol: float = 1e-12) -> float:
    """Global max of :func:`clarkson_function` on [0, 1].

    A uniform grid scan locates the best bracket, then golden-section search
    refines it to width ``tol``.  This is the exact norm of the 2x2 form
    ``x1 y1 + x1 y2 + x2 y1 - x2 y2`` on l_p x l_p.
    """
    p = as_exponent(p)
    if p < 2:
        raise ValueError(f"clarkson_sup is used for p >= 2, got {p}")
    if is_inf(p):
        return 2.0
    xs = np.linspace(0.0, 1.0, grid)
    fs = clarkson_function(xs, p)
    i = int(np.argmax(fs))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    f = lambda t: float(clarkson_function(t, p))
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return max(float(fs[i]), fc, fd, f(0.5 * (a + b)))


def _sign_vectors(n: int) -> np.ndarray:
    return np.array(list(itertools.product((1.0, -1.0), repeat=n)))


def brute_force_linf_norm(expr: FormExpr) -> float:
    """Exact norm on products of l_inf balls by enumerating all sign vectors.

    A multilinear form attains its sup over a product of cubes at vertices.
    The total number of coordinates must not exceed 24.
    """
    total = sum(expr.slot_dims)
    if total > BRUTE_FORCE_CAP:
        raise FormTooLargeError(
            f"{total} coordinates: too large for corner enumeration (cap {BRUTE_FORCE_CAP})"
        )
    t = expand_coeffs(expr).to_dense()
    # contract one axis at a time against every sign vector of that slot;
    # leading axes accumulate the corner choices
    out = t[None, ...]
    for n in expr.slot_dims:
        signs = _sign_vectors(n)
        out = np.tensordot(out, signs, axes=([1], [1]))
        out = np.moveaxis(out, -1, 1).reshape((-1,) + out.shape[1:-1])
    return float(np.abs(out).max())
