import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlbounds.forms import (
    CoeffTensor,
    FormTooLargeError,
    Leaf,
    Product,
    Shift,
    Sum,
    evaluate,
    expand_coeffs,
    make_littlewood,
    make_tilde,
    slot_coefficients,
    unit_count,
)


# Hand-transcribed forms, used as independent oracles for the recursive builders.

def t2_lit(x, y, i=0, j=0):
    return x[i] * y[j] + x[i] * y[j + 1] + x[i + 1] * y[j] - x[i + 1] * y[j + 1]


def t3_lit(x, y, z):
    return (z[0] + z[1]) * t2_lit(x, y, 0, 0) + (z[0] - z[1]) * t2_lit(x, y, 2, 2)


def t4_lit(x, y, z, w):
    a = (z[0] + z[1]) * t2_lit(x, y, 0, 0) + (z[0] - z[1]) * t2_lit(x, y, 2, 2)
    b = (z[2] + z[3]) * t2_lit(x, y, 4, 4) + (z[2] - z[3]) * t2_lit(x, y, 6, 6)
    return (w[0] + w[1]) * a + (w[0] - w[1]) * b


def tt4_lit(x, y, z, w):
    a0, a1 = t2_lit(x, y, 0, 0), t2_lit(x, y, 2, 2)
    b0, b1 = t2_lit(z, w, 0, 0), t2_lit(z, w, 2, 2)
    return a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1


def backshift(x, d):
    out = np.zeros_like(x)
    out[: len(x) - d] = x[d:]
    return out


def tt8_lit(*v):
    lo, hi = v[:4], v[4:]
    slo = [backshift(x, 4) for x in lo]
    shi = [backshift(x, 4) for x in hi]
    return (tt4_lit(*lo) * tt4_lit(*hi) + tt4_lit(*lo) * tt4_lit(*shi)
            + tt4_lit(*slo) * tt4_lit(*hi) - tt4_lit(*slo) * tt4_lit(*shi))


def literal_tensor(fn, dims):
    """Coefficient tensor of a hand-written form by evaluating on basis vectors."""
    out = np.zeros(dims)
    for idx in itertools.product(*(range(n) for n in dims)):
        args = [np.eye(n)[i] for n, i in zip(dims, idx)]
        out[idx] = fn(*args)
    return out


def rand_args(rng, dims):
    return [rng.standard_normal(n) for n in dims]


# -- construction examples --------------------------------------------------

def test_t2_matrix():
    assert np.array_equal(expand_coeffs(make_littlewood(2)).to_dense(), [[1, 1], [1, -1]])


@pytest.mark.parametrize("m,count", [(2, 4), (3, 16), (4, 64), (5, 256), (6, 1024)])
def test_littlewood_count_and_signs(m, count):
    t = expand_coeffs(make_littlewood(m))
    assert t.nnz == count == 4 ** (m - 1)
    assert set(np.unique(t.values)) <= {-1.0, 1.0}
    assert unit_count(make_littlewood(m)) == count


def test_t3_matches_display():
    t = expand_coeffs(make_littlewood(3))
    assert np.array_equal(t.to_dense(), literal_tensor(t3_lit, (4, 4, 2)))


def test_t4_matches_display():
    t = expand_coeffs(make_littlewood(4))
    assert np.array_equal(t.to_dense(), literal_tensor(t4_lit, (8, 8, 4, 2)))


def test_tilde2_is_t2():
    a, b = expand_coeffs(make_tilde(2)), expand_coeffs(make_littlewood(2))
    assert a == b


def test_tilde4_matches_display():
    t = expand_coeffs(make_tilde(4))
    assert t.nnz == 64
    assert set(np.unique(t.values)) == {-1.0, 1.0}
    assert np.array_equal(t.to_dense(), literal_tensor(tt4_lit, (4,) * 4))


def test_tilde8_matches_display_on_random_inputs():
    rng = np.random.default_rng(5)
    t8 = make_tilde(8)
    for _ in range(50):
        args = rand_args(rng, t8.slot_dims)
        assert evaluate(t8, args) == pytest.approx(tt8_lit(*args), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("m,count", [(2, 4), (4, 64), (8, 2**14), (16, 2**30)])
def test_tilde_counts(m, count):
    assert unit_count(make_tilde(m)) == count


def test_tilde8_expansion_is_unit():
    t = expand_coeffs(make_tilde(8))
    assert t.nnz == 2**14
    assert np.all(np.abs(t.values) == 1.0)


def test_tilde4_differs_from_t4():
    a, b = expand_coeffs(make_tilde(4)), expand_coeffs(make_littlewood(4))
    assert a.nnz == b.nnz == 64
    assert a != b


def test_tilde16_too_large():
    with pytest.raises(FormTooLargeError, match="too large"):
        expand_coeffs(make_tilde(16))


@pytest.mark.parametrize("bad", [0, 1, -3])
def test_littlewood_rejects_small_m(bad):
    with pytest.raises(ValueError):
        make_littlewood(bad)


@pytest.mark.parametrize("bad", [3, 6, 12, 1])
def test_tilde_rejects_non_power(bad):
    with pytest.raises(ValueError):
        make_tilde(bad)


# -- evaluation ---------------------------------------------------------------

def test_evaluate_examples():
    t2, t3 = make_littlewood(2), make_littlewood(3)
    assert evaluate(t2, [[1, 0], [1, 0]]) == 1
    assert evaluate(t2, [[1, 1], [1, 0]]) == 2
    e3 = np.eye(4)[2]
    assert evaluate(t3, [e3, e3, [1, -1]]) == 2


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(make_littlewood(2), [[1, 0, 0], [1, 0]])
    with pytest.raises(ValueError):
        evaluate(make_littlewood(3), [[1, 0, 0, 0], [1, 0, 0, 0]])


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_evaluate_matches_expansion(m):
    expr = make_littlewood(m)
    t = expand_coeffs(expr)
    rng = np.random.default_rng(m)
    for _ in range(20):
        args = rand_args(rng, expr.slot_dims)
        assert evaluate(expr, args) == pytest.approx(t.evaluate(*args), rel=1e-12, abs=1e-12)


def test_evaluate_batched():
    expr = make_tilde(4)
    rng = np.random.default_rng(1)
    args = [rng.standard_normal((7, n)) for n in expr.slot_dims]
    vals = evaluate(expr, args)
    assert vals.shape == (7,)
    for b in range(7):
        assert vals[b] == pytest.approx(tt4_lit(*(a[b] for a in args)), rel=1e-12, abs=1e-12)


def test_slot_coefficients_examples():
    t2 = make_littlewood(2)
    np.testing.assert_array_equal(slot_coefficients(t2, [None, [1, 0]], 1), [1, 1])
    np.testing.assert_array_equal(slot_coefficients(t2, [[1, 1], None], 2), [2, 0])


def test_slot_coefficients_invalid_slot():
    with pytest.raises(ValueError):
        slot_coefficients(make_littlewood(2), [[1, 0], [1, 0]], 5)


@pytest.mark.parametrize("expr", [make_littlewood(3), make_littlewood(4), make_tilde(4), make_tilde(8)],
                         ids=["T3", "T4", "tT4", "tT8"])
def test_slot_coefficients_linearity_oracle(expr):
    rng = np.random.default_rng(11)
    for trial in range(100):
        args = rand_args(rng, expr.slot_dims)
        k = expr.slots[trial % expr.degree]
        c = slot_coefficients(expr, args, k)
        pos = expr.slots.index(k)
        assert np.dot(c, args[pos]) == pytest.approx(evaluate(expr, args), rel=1e-12, abs=1e-12)


# -- properties ---------------------------------------------------------------

_seeds = st.integers(0, 2**32 - 1)
_scalars = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(seed=_seeds, a=_scalars, b=_scalars, m=st.sampled_from([2, 3, 4]), tilde=st.booleans())
def test_multilinear_in_each_slot(seed, a, b, m, tilde):
    expr = make_tilde(4 if m == 4 else 2) if tilde else make_littlewood(m)
    rng = np.random.default_rng(seed)
    args = rand_args(rng, expr.slot_dims)
    k = int(rng.integers(expr.degree))
    x, y = rng.standard_normal(expr.slot_dims[k]), rng.standard_normal(expr.slot_dims[k])
    def at(v):
        return evaluate(expr, args[:k] + [v] + args[k + 1:])
    lhs = at(a * x + b * y)
    rhs = a * at(x) + b * at(y)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * (1 + abs(a) + abs(b)) * 10)


@settings(max_examples=60, deadline=None)
@given(seed=_seeds, d=st.integers(0, 3), k=st.sampled_from([1, 2]))
def test_shift_is_backward_shift(seed, d, k):
    rng = np.random.default_rng(seed)
    coeffs = CoeffTensor.from_dense(rng.integers(-2, 3, size=(4, 4)).astype(float) + 5.0)
    base = Leaf((1, 2), coeffs)
    shifted = Shift(base, k, d, dim=4)
    x, y = rng.standard_normal(4), rng.standard_normal(4)
    args = [x, y]
    ref_args = [backshift(x, d) if k == 1 else x, backshift(y, d) if k == 2 else y]
    assert evaluate(shifted, args) == pytest.approx(evaluate(base, ref_args), rel=1e-12, abs=1e-12)


def test_shift_rejects_offset_beyond_dim():
    leaf = Leaf((1, 2), CoeffTensor.from_dense(np.ones((2, 2))))
    with pytest.raises(ValueError):
        Shift(leaf, 1, 2, dim=2)


def test_shift_default_dim_extends_ambient():
    leaf = Leaf((1, 2), CoeffTensor.from_dense(np.array([[1.0, 2.0], [3.0, 4.0]])))
    sh = Shift(leaf, 1, 2)
    assert sh.slot_dims == (4, 2)
    assert evaluate(sh, [[9, 9, 1, 0], [0, 1]]) == 2.0


def test_sum_rejects_mixed_signatures():
    a = Leaf((1, 2), CoeffTensor.from_dense(np.ones((2, 2))))
    b = Leaf((1, 3), CoeffTensor.from_dense(np.ones((2, 2))))
    with pytest.raises(ValueError):
        Sum([(1, a), (1, b)])


def test_product_rejects_shared_slots():
    a = Leaf((1, 2), CoeffTensor.from_dense(np.ones((2, 2))))
    with pytest.raises(ValueError):
        Product(a, a)


@settings(max_examples=40, deadline=None)
@given(seed=_seeds, shape=st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_expand_round_trip_random_leaf_products(seed, shape):
    rng = np.random.default_rng(seed)
    dense = rng.integers(-3, 4, size=shape).astype(float)
    dense[(0,) * len(shape)] = 1.0
    leaf = Leaf(tuple(range(1, len(shape) + 1)), CoeffTensor.from_dense(dense))
    other = Leaf((len(shape) + 1,), CoeffTensor.from_dense(np.array([1.0, -2.0])))
    expr = Product(leaf, other)
    t = expand_coeffs(expr)
    args = rand_args(rng, expr.slot_dims)
    assert t.evaluate(*args) == pytest.approx(evaluate(expr, args), rel=1e-12, abs=1e-10)


# -- CoeffTensor --------------------------------------------------------------

def test_coeff_tensor_json_round_trip():
    t = expand_coeffs(make_littlewood(3))
    d = json.loads(t.to_json())
    assert d["degree"] == 3 and d["dims"] == [4, 4, 2]
    idx = [tuple(e["idx"]) for e in d["entries"]]
    assert idx == sorted(idx)
    assert min(min(i) for i in idx) == 1
    assert CoeffTensor.from_json(t.to_json()) == t


def test_coeff_tensor_drops_zeros_and_checks_bounds():
    t = CoeffTensor((2, 2), {(1, 1): 1.0, (2, 2): 0.0})
    assert t.nnz == 1
    with pytest.raises(ValueError):
        CoeffTensor((2, 2), {(3, 1): 1.0})
    with pytest.raises(ValueError):
        CoeffTensor((2, 2), {(0, 1): 1.0})


def test_coeff_tensor_permute():
    t = expand_coeffs(make_littlewood(3))
    p = t.permute((2, 0, 1))
    np.testing.assert_array_equal(p.to_dense(), np.transpose(t.to_dense(), (2, 0, 1)))
