"""Multilinear forms as expression trees.

A form is built from four node types:

* :class:`Leaf` -- an explicit (sparse) coefficient tensor on an ordered list
  of slots;
* :class:`Sum` -- a signed sum of forms sharing one slot signature;
* :class:`Product` -- the product of two forms on disjoint slot sets;
* :class:`Shift` -- a form whose argument at one slot is first passed through
  the backward shift ``(B^d x)_i = x_{i+d}`` (zero padded).

Evaluation walks the tree and never enumerates expanded coefficients, so
forms with ~2^30 nonzero coefficients (``make_tilde(16)``) remain cheap to
evaluate.  Slots are identified by positive integers; the families built
here use slots ``1..m``.  Coordinates are 1-based in :class:`CoeffTensor`
I/O and 0-based in numpy arrays.

All evaluation entry points accept either a single vector per slot or a
batch of vectors of shape ``(B, n)`` per slot; in the batched case the
result has shape ``(B,)``.
"""

from __future__ import annotations

import json
import string
from collections.abc import Mapping, Sequence
from math import prod

import numpy as np
import scipy.sparse as sp

__all__ = [
    "CoeffTensor",
    "FormExpr",
    "FormTooLargeError",
    "Leaf",
    "Product",
    "Shift",
    "Sum",
    "DEFAULT_EXPAND_LIMIT",
    "evaluate",
    "expand_coeffs",
    "make_littlewood",
    "make_tilde",
    "slot_coefficients",
    "unit_count",
]

DEFAULT_EXPAND_LIMIT = 2**24
_DENSE_LEAF_MAX = 2**16


class FormTooLargeError(ValueError):
    """Raised when an operation would have to materialise too many terms."""


class CoeffTensor:
    """Sparse m-index coefficient tensor.

    ``entries`` maps 1-based index tuples ``(j_1, ..., j_m)`` to nonzero
    scalars.  Zero coefficients are dropped on construction.  Internally the
    entries are kept as a lexicographically sorted 0-based index array and a
    float64 value array.
    """

    __slots__ = ("_dims", "_idx", "_val")

    def __init__(self, dims: Sequence[int], entries: Mapping[tuple, float] | None = None):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {dims}")
        entries = entries or {}
        m = len(dims)
        idx = np.zeros((len(entries), m), dtype=np.int64)
        val = np.zeros(len(entries), dtype=np.float64)
        for r, (key, c) in enumerate(entries.items()):
            key = tuple(key)
            if len(key) != m:
                raise ValueError(f"index {key} has wrong length for degree {m}")
            for j, (i, d) in enumerate(zip(key, dims)):
                if not 1 <= i <= d:
                    raise ValueError(f"index {key} out of range for dims {dims}")
                idx[r, j] = i - 1
            val[r] = c
        self._dims = dims
        self._idx, self._val = _canonical(idx, val)

    @classmethod
    def _from_arrays(cls, dims, idx0, val, combine=True):
        self = cls.__new__(cls)
        self._dims = tuple(int(d) for d in dims)
        idx0 = np.asarray(idx0, dtype=np.int64).reshape(-1, len(self._dims))
        val = np.asarray(val, dtype=np.float64).reshape(-1)
        if len(idx0) and (idx0.min() < 0 or np.any(idx0 >= np.array(self._dims))):
            raise ValueError("index out of range")
        if combine:
            idx0, val = _canonical(idx0, val)
        self._idx, self._val = idx0, val
        return self

    @classmethod
    def from_dense(cls, array) -> CoeffTensor:
        a = np.asarray(array, dtype=np.float64)
        if a.ndim == 0:
            raise ValueError("dense coefficient array must have at least one axis")
        idx = np.argwhere(a != 0)
        return cls._from_arrays(a.shape, idx, a[tuple(idx.T)], combine=False)

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def degree(self) -> int:
        return len(self._dims)

    @property
    def nnz(self) -> int:
        return len(self._val)

    @property
    def indices(self) -> np.ndarray:
        """1-based index array of shape ``(nnz, degree)``."""
        return self._idx + 1

    @property
    def values(self) -> np.ndarray:
        return self._val.copy()

    @property
    def entries(self) -> dict[tuple[int, ...], float]:
        return {tuple(int(i) + 1 for i in row): float(c) for row, c in zip(self._idx, self._val)}

    def to_dense(self) -> np.ndarray:
        size = prod(self._dims)
        if size > 2**27:
            raise FormTooLargeError(f"dense tensor with {size} cells is too large")
        out = np.zeros(self._dims)
        out[tuple(self._idx.T)] = self._val
        return out

    def evaluate(self, *args) -> float:
        """Direct evaluation ``sum_j c_j prod_k x^{(k)}_{j_k}`` (reference path)."""
        if len(args) != self.degree:
            raise ValueError(f"expected {self.degree} arguments, got {len(args)}")
        terms = self._val.copy()
        for k, x in enumerate(args):
            x = np.asarray(x, dtype=np.float64)
            if x.shape != (self._dims[k],):
                raise ValueError(f"argument {k + 1} has shape {x.shape}, expected ({self._dims[k]},)")
            terms *= x[self._idx[:, k]]
        return float(terms.sum())

    def permute(self, order: Sequence[int]) -> CoeffTensor:
        """Tensor with axes reordered; ``order`` lists old 0-based axes."""
        order = list(order)
        if sorted(order) != list(range(self.degree)):
            raise ValueError(f"{order} is not a permutation of the axes")
        dims = [self._dims[j] for j in order]
        return CoeffTensor._from_arrays(dims, self._idx[:, order], self._val)

    def __eq__(self, other):
        if not isinstance(other, CoeffTensor):
            return NotImplemented
        return (
            self._dims == other._dims
            and np.array_equal(self._idx, other._idx)
            and np.array_equal(self._val, other._val)
        )

    __hash__ = None

    def __repr__(self):
        return f"CoeffTensor(dims={self._dims}, nnz={self.nnz})"

    def to_json(self) -> str:
        payload = {
            "degree": self.degree,
            "dims": list(self._dims),
            "entries": [
                {"idx": [int(i) + 1 for i in row], "c": float(c)}
                for row, c in zip(self._idx, self._val)
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> CoeffTensor:
        payload = json.loads(text)
        dims = payload["dims"]
        if payload.get("degree", len(dims)) != len(dims):
            raise ValueError("degree does not match dims")
        entries = {}
        for e in payload["entries"]:
            key = tuple(e["idx"])
            if key in entries:
                raise ValueError(f"duplicate index {key}")
            entries[key] = e["c"]
        return cls(dims, entries)


def _canonical(idx, val):
    """Merge duplicate indices, drop zeros, sort rows lexicographically."""
    if len(val) == 0:
        return idx.reshape(0, idx.shape[1]), val
    uniq, inv = np.unique(idx, axis=0, return_inverse=True)
    summed = np.bincount(inv.reshape(-1), weights=val, minlength=len(uniq))
    keep = summed != 0
    return np.ascontiguousarray(uniq[keep]), summed[keep]


# ---------------------------------------------------------------------------
# expression nodes
# ---------------------------------------------------------------------------


class FormExpr:
    """Base class of the form expression nodes.

    Every node exposes ``slots`` (sorted slot ids), ``dims`` (slot -> ambient
    dimension), ``count`` (analytic nonzero count, exact when every Sum in
    the tree has disjoint supports) and ``unit`` (structural guarantee that
    all expanded coefficients are +-1).
    """

    slots: tuple[int, ...]
    dims: dict[int, int]
    count: int
    unit: bool

    @property
    def degree(self) -> int:
        return len(self.slots)

    @property
    def slot_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[s] for s in self.slots)

    def __call__(self, *args):
        return evaluate(self, args)


class Leaf(FormExpr):
    def __init__(self, slots: Sequence[int], coeffs: CoeffTensor):
        axes = tuple(int(s) for s in slots)
        if len(set(axes)) != len(axes):
            raise ValueError(f"repeated slot in {axes}")
        if not isinstance(coeffs, CoeffTensor):
            coeffs = CoeffTensor.from_dense(coeffs)
        if len(axes) != coeffs.degree:
            raise ValueError("slot list and tensor degree differ")
        self.axes = axes
        self.coeffs = coeffs
        self.slots = tuple(sorted(axes))
        self.dims = dict(zip(axes, coeffs.dims))
        self.count = coeffs.nnz
        self.unit = bool(np.all(np.abs(coeffs._val) == 1.0))
        self._dense = coeffs.to_dense() if prod(coeffs.dims) <= _DENSE_LEAF_MAX else None
        self._onehot = {}

    def __repr__(self):
        return f"Leaf(slots={self.axes}, dims={self.coeffs.dims}, nnz={self.count})"


class Sum(FormExpr):
    """Signed sum.  ``disjoint=True`` asserts the terms have disjoint supports,
    which makes ``count`` exact and lets ``unit`` propagate."""

    def __init__(self, terms, disjoint: bool = False):
        terms = tuple((int(s), t) for s, t in terms)
        if not terms:
            raise ValueError("empty sum")
        sig = terms[0][1].slots
        for s, t in terms:
            if s not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {s}")
            if t.slots != sig:
                raise ValueError(f"inconsistent slot signatures {sig} vs {t.slots}")
        self.terms = terms
        self.disjoint = disjoint
        self.slots = sig
        self.dims = {s: max(t.dims[s] for _, t in terms) for s in sig}
        self.count = sum(t.count for _, t in terms)
        self.unit = disjoint and all(t.unit for _, t in terms)

    def __repr__(self):
        return f"Sum({len(self.terms)} terms, slots={self.slots})"


class Product(FormExpr):
    def __init__(self, left: FormExpr, right: FormExpr):
        if set(left.slots) & set(right.slots):
            raise ValueError(f"product factors share slots {set(left.slots) & set(right.slots)}")
        self.left = left
        self.right = right
        self.slots = tuple(sorted(left.slots + right.slots))
        self.dims = {**left.dims, **right.dims}
        self.count = left.count * right.count
        self.unit = left.unit and right.unit

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"


class Shift(FormExpr):
    """``inner`` evaluated with ``B^offset`` applied to the argument at ``slot``.

    The node's ambient dimension at ``slot`` is ``dim`` (default
    ``inner.dims[slot] + offset``); shifted coordinates beyond it read as 0.
    """

    def __init__(self, inner: FormExpr, slot: int, offset: int, dim: int | None = None):
        if slot not in inner.dims:
            raise ValueError(f"slot {slot} not in {inner.slots}")
        offset = int(offset)
        if dim is None:
            dim = inner.dims[slot] + offset
        if not 0 <= offset < dim:
            raise ValueError(f"shift offset {offset} must lie in [0, {dim})")
        self.inner = inner
        self.slot = slot
        self.offset = offset
        self.slots = inner.slots
        self.dims = {**inner.dims, slot: int(dim)}
        self.count = inner.count
        self.unit = inner.unit and offset + inner.dims[slot] <= dim

    def __repr__(self):
        return f"Shift(slot={self.slot}, offset={self.offset}, dim={self.dims[self.slot]}, {self.inner!r})"


def shift_all(expr: FormExpr, offset: int, dim: int | None = None) -> FormExpr:
    """Apply ``B^offset`` at every slot of ``expr``."""
    out = expr
    for s in expr.slots:
        out = Shift(out, s, offset, dim)
    return out


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class _Walker:
    """One evaluation pass over a tree, with a memo keyed by (node, window).

    A window ``(off, lim)`` for a slot describes the vector a node sees there:
    ``v_i = x[off + i]`` for ``i < lim`` and 0 otherwise.  Coefficient vectors
    are always returned in the coordinates of the original argument ``x``.
    """

    def __init__(self, args: dict[int, np.ndarray]):
        self.args = args
        self.batch = next(iter(args.values())).shape[0]
        self.vmemo = {}
        self.cmemo = {}

    def _key(self, node, win):
        return (id(node),) + tuple(win[s] for s in node.slots)

    def _view(self, slot, win, n):
        x = self.args[slot]
        off, lim = win[slot]
        valid = max(0, min(n, lim, x.shape[1] - off))
        if valid == n:
            return x[:, off:off + n]
        v = np.zeros((self.batch, n))
        if valid:
            v[:, :valid] = x[:, off:off + valid]
        return v

    def value(self, node, win):
        key = self._key(node, win)
        hit = self.vmemo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Leaf):
            out = self._leaf_value(node, win)
        elif isinstance(node, Sum):
            out = np.zeros(self.batch)
            for sign, t in node.terms:
                out = out + sign * self.value(t, win)
        elif isinstance(node, Product):
            out = self.value(node.left, win) * self.value(node.right, win)
        elif isinstance(node, Shift):
            out = self.value(node.inner, _shifted(node, win))
        else:
            raise TypeError(f"unknown node {node!r}")
        self.vmemo[key] = out
        return out

    def coeffs(self, node, win, k):
        key = self._key(node, win) + (k,)
        hit = self.cmemo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Leaf):
            out = self._leaf_coeffs(node, win, k)
        elif isinstance(node, Sum):
            out = np.zeros((self.batch, self.args[k].shape[1]))
            for sign, t in node.terms:
                out = out + sign * self.coeffs(t, win, k)
        elif isinstance(node, Product):
            if k in node.left.dims:
                out = self.coeffs(node.left, win, k) * self.value(node.right, win)[:, None]
            else:
                out = self.coeffs(node.right, win, k) * self.value(node.left, win)[:, None]
        elif isinstance(node, Shift):
            out = self.coeffs(node.inner, _shifted(node, win), k)
        else:
            raise TypeError(f"unknown node {node!r}")
        self.cmemo[key] = out
        return out

    def _leaf_value(self, leaf, win):
        views = [self._view(s, win, n) for s, n in zip(leaf.axes, leaf.coeffs.dims)]
        if leaf._dense is not None:
            letters = string.ascii_lowercase[: len(views)]
            subs = letters + "," + ",".join("Z" + c for c in letters) + "->Z"
            return np.einsum(subs, leaf._dense, *views)
        idx, val = leaf.coeffs._idx, leaf.coeffs._val
        terms = np.broadcast_to(val, (self.batch, len(val))).copy()
        for j, v in enumerate(views):
            terms *= v[:, idx[:, j]]
        return terms.sum(axis=1)

    def _leaf_coeffs(self, leaf, win, k):
        j = leaf.axes.index(k)
        dims = leaf.coeffs.dims
        views = [self._view(s, win, n) for s, n in zip(leaf.axes, dims)]
        if leaf._dense is not None and len(views) == 1:
            local = np.broadcast_to(leaf._dense, (self.batch, dims[0]))
        elif leaf._dense is not None:
            letters = string.ascii_lowercase[: len(views)]
            others = [c for i, c in enumerate(letters) if i != j]
            ops = [v for i, v in enumerate(views) if i != j]
            subs = letters + "".join("," + "Z" + c for c in others) + "->Z" + letters[j]
            local = np.einsum(subs, leaf._dense, *ops)
        else:
            idx, val = leaf.coeffs._idx, leaf.coeffs._val
            terms = np.broadcast_to(val, (self.batch, len(val))).copy()
            for i, v in enumerate(views):
                if i != j:
                    terms *= v[:, idx[:, i]]
            onehot = leaf._onehot.get(j)
            if onehot is None:
                onehot = sp.csr_matrix(
                    (np.ones(len(val)), (np.arange(len(val)), idx[:, j])), shape=(len(val), dims[j])
                )
                leaf._onehot[j] = onehot
            local = np.asarray((onehot.T @ terms.T).T)
        n_orig = self.args[k].shape[1]
        off, lim = win[k]
        valid = max(0, min(dims[j], lim, n_orig - off))
        out = np.zeros((self.batch, n_orig))
        if valid:
            out[:, off:off + valid] = local[:, :valid]
        return out


def _shifted(node: Shift, win):
    off, lim = win[node.slot]
    inner = dict(win)
    inner[node.slot] = (off + node.offset, min(lim, node.dims[node.slot]) - node.offset)
    return inner


def _bind(expr: FormExpr, args, skip=None):
    """Map args to ``{slot: (B, n) array}``; returns (args, batched)."""
    if isinstance(args, Mapping):
        items = dict(args)
    else:
        args = list(args)
        if len(args) != expr.degree:
            raise ValueError(f"expected {expr.degree} arguments, got {len(args)}")
        items = dict(zip(expr.slots, args))
    if set(items) != set(expr.slots):
        raise ValueError(f"arguments given for slots {sorted(items)}, form has {expr.slots}")
    batched = None
    bound = {}
    for s in expr.slots:
        n = expr.dims[s]
        x = items[s]
        if s == skip and x is None:
            continue
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2):
            raise ValueError(f"argument for slot {s} must be 1-D or 2-D")
        if batched is None:
            batched = x.ndim == 2
        elif batched != (x.ndim == 2):
            raise ValueError("mixing batched and unbatched arguments")
        if x.shape[-1] != n:
            raise ValueError(f"slot {s} has dimension {n}, argument has length {x.shape[-1]}")
        bound[s] = x if x.ndim == 2 else x[None, :]
    if not bound:
        bound_b = 1
        batched = False
    else:
        sizes = {x.shape[0] for x in bound.values()}
        if len(sizes) != 1:
            raise ValueError(f"inconsistent batch sizes {sizes}")
        bound_b = sizes.pop()
    if skip is not None and skip not in bound:
        bound[skip] = np.zeros((bound_b, expr.dims[skip]))
    return bound, batched


def _root_window(expr):
    return {s: (0, expr.dims[s]) for s in expr.slots}


def evaluate(expr: FormExpr, args):
    """Evaluate ``expr`` at one vector per slot (sequence in slot order or
    ``{slot: vector}``)."""
    bound, batched = _bind(expr, args)
    out = _Walker(bound).value(expr, _root_window(expr))
    return out if batched else float(out[0])


def slot_coefficients(expr: FormExpr, args, k: int):
    """Coefficients ``c_i = T(..., e_i at slot k, ...)`` of the partial linear form.

    The entry for slot ``k`` in ``args`` is ignored (it may be ``None``).
    """
    if k not in expr.dims:
        raise ValueError(f"invalid slot id {k}; form has slots {expr.slots}")
    if isinstance(args, Mapping):
        args = dict(args)
    else:
        args = list(args)
        if len(args) != expr.degree:
            raise ValueError(f"expected {expr.degree} arguments, got {len(args)}")
        args = dict(zip(expr.slots, args))
    args[k] = None
    bound, batched = _bind(expr, args, skip=k)
    out = _Walker(bound).coeffs(expr, _root_window(expr), k)
    return out if batched else out[0]


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------


def expand_coeffs(expr: FormExpr, limit: int = DEFAULT_EXPAND_LIMIT) -> CoeffTensor:
    """Exact sparse coefficient tensor of ``expr`` (axes in slot order)."""
    if expr.count > limit:
        raise FormTooLargeError(
            f"form has up to {expr.count} nonzero coefficients, too large for limit {limit}"
        )
    idx, val = _expand(expr)
    return CoeffTensor._from_arrays(expr.slot_dims, idx, val)


def _expand(node):
    if isinstance(node, Leaf):
        order = [node.axes.index(s) for s in node.slots]
        return node.coeffs._idx[:, order], node.coeffs._val
    if isinstance(node, Sum):
        parts = [_expand(t) for _, t in node.terms]
        idx = np.concatenate([p[0] for p in parts])
        val = np.concatenate([sign * p[1] for (sign, _), p in zip(node.terms, parts)])
        return _canonical(idx, val)
    if isinstance(node, Product):
        li, lv = _expand(node.left)
        ri, rv = _expand(node.right)
        nl, nr = len(lv), len(rv)
        idx = np.concatenate([np.repeat(li, nr, axis=0), np.tile(ri, (nl, 1))], axis=1)
        cols = list(node.left.slots) + list(node.right.slots)
        idx = idx[:, [cols.index(s) for s in node.slots]]
        return idx, np.outer(lv, rv).reshape(-1)
    if isinstance(node, Shift):
        idx, val = _expand(node.inner)
        j = node.slots.index(node.slot)
        idx = idx.copy()
        idx[:, j] += node.offset
        keep = idx[:, j] < node.dims[node.slot]
        return idx[keep], val[keep]
    raise TypeError(f"unknown node {node!r}")


def unit_count(expr: FormExpr) -> int | None:
    """Number of nonzero coefficients when the tree structurally guarantees
    that all of them are +-1 (disjoint sums throughout); otherwise ``None``."""
    return expr.count if expr.unit else None


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

_T2 = np.array([[1.0, 1.0], [1.0, -1.0]])


def _bilinear_t2(s1, s2):
    return Leaf((s1, s2), CoeffTensor.from_dense(_T2))


def _littlewood(slots):
    if len(slots) == 2:
        return _bilinear_t2(*slots)
    prev = _littlewood(slots[:-1])
    last = slots[-1]
    n = prev.dims[slots[0]]
    shifted = prev
    for s in prev.slots:
        d = prev.dims[s]
        shifted = Shift(shifted, s, d, 2 * d)
    plus = Leaf((last,), CoeffTensor.from_dense([1.0, 1.0]))
    minus = Leaf((last,), CoeffTensor.from_dense([1.0, -1.0]))
    out = Sum([(1, Product(plus, prev)), (1, Product(minus, shifted))], disjoint=True)
    assert out.dims[slots[0]] == 2 * n
    return out


def make_littlewood(m: int) -> FormExpr:
    """The m-linear forms T_m built from the 2x2 sign pattern.

    ``T_m(x^1..x^m) = (x^m_1 + x^m_2) T_{m-1}(x^1..x^{m-1})
    + (x^m_1 - x^m_2) T_{m-1}(B^{n_1} x^1, ..., B^{n_{m-1}} x^{m-1})`` where
    ``n_k`` are the slot dimensions of ``T_{m-1}``.  Slot dimensions of T_m
    are ``(2^{m-1}, 2^{m-1}, 2^{m-2}, ..., 4, 2)``; there are ``4^{m-1}``
    coefficients, all +-1.
    """
    if int(m) != m or m < 2:
        raise ValueError(f"make_littlewood needs an integer m >= 2, got {m}")
    return _littlewood(tuple(range(1, int(m) + 1)))


def _tilde(slots):
    if len(slots) == 2:
        return _bilinear_t2(*slots)
    half = len(slots) // 2
    a0 = _tilde(slots[:half])
    b0 = _tilde(slots[half:])
    n = a0.dims[slots[0]]
    a1 = shift_all(a0, n, 2 * n)
    b1 = shift_all(b0, n, 2 * n)
    return Sum(
        [(1, Product(a0, b0)), (1, Product(a0, b1)), (1, Product(a1, b0)), (-1, Product(a1, b1))],
        disjoint=True,
    )


def make_tilde(m: int) -> FormExpr:
    """The doubled family: ``T~_2 = T_2`` and for ``m = 2k``

    ``T~_{2k}(u, v) = A0 B0 + A0 B1 + A1 B0 - A1 B1`` with ``A0 = T~_k(u)``,
    ``A1 = T~_k(B^n u)`` (and likewise for the second half ``v``), ``n`` the
    slot dimension of ``T~_k``.  All m slots have dimension m; the
    coefficient count is 4, 64, 2^14, 2^30 for m = 2, 4, 8, 16.
    """
    m_int = int(m)
    if m_int != m or m_int < 2 or m_int & (m_int - 1):
        raise ValueError(f"make_tilde needs m = 2 or a power of two, got {m}")
    return _tilde(tuple(range(1, m_int + 1)))
