import json
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hlbounds.polynomials import (
    Polynomial,
    check_eq_m,
    grid_sup,
    make_Q,
    poly_coeff_norm,
    poly_pow,
    sup_norm_poly,
)


def sympy_Q(d, xs):
    """Q_d built symbolically from its defining recursion."""
    if d == 2:
        return xs[0] ** 2 - xs[1] ** 2
    h = d // 2
    return sympy.expand(sympy_Q(h, xs[:h]) ** 2 - sympy_Q(h, xs[h:]) ** 2)


def as_sympy_dict(expr, xs):
    poly = sympy.Poly(expr, *xs)
    return {tuple(k): int(v) for k, v in poly.terms()}


def random_poly(seed, nvars=3, degree=3, terms=5):
    rng = np.random.default_rng(seed)
    entries = {}
    for _ in range(terms):
        cuts = np.sort(rng.integers(0, degree + 1, size=nvars - 1))
        alpha = np.diff(np.concatenate([[0], cuts, [degree]]))
        entries[tuple(int(a) for a in alpha)] = int(rng.integers(-5, 6)) or 1
    return Polynomial(nvars, degree, entries)


# -- construction ---------------------------------------------------------------

def test_q2():
    assert make_Q(2).entries == {(0, 2): -1, (2, 0): 1}


def test_q4_expansion():
    q4 = make_Q(4)
    assert q4.entries == {
        (4, 0, 0, 0): 1, (2, 2, 0, 0): -2, (0, 4, 0, 0): 1,
        (0, 0, 4, 0): -1, (0, 0, 2, 2): 2, (0, 0, 0, 4): -1,
    }


@pytest.mark.parametrize("d", [2, 4, 8, 16])
def test_q_matches_sympy(d):
    xs = sympy.symbols(f"x1:{d + 1}")
    ref = as_sympy_dict(sympy_Q(d, xs), xs)
    q = make_Q(d)
    assert q.entries == ref
    assert q.degree == d and q.nvars == d


def test_q8_term_count():
    # 19 terms in each squared half, supports disjoint
    assert len(make_Q(8)) == 38


@pytest.mark.parametrize("bad", [1, 3, 6, 12])
def test_make_q_rejects(bad):
    with pytest.raises(ValueError):
        make_Q(bad)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        Polynomial(2, 2, {(1, 0): 1})
    with pytest.raises(ValueError):
        Polynomial(2, 2, {(2, 0, 0): 1})
    assert len(Polynomial(2, 2, {(2, 0): 0, (1, 1): 3})) == 1


# -- powers -------------------------------------------------------------------

def test_pow_examples():
    q2 = make_Q(2)
    sq = poly_pow(q2, 2)
    assert sq.entries == {(4, 0): 1, (2, 2): -2, (0, 4): 1}
    assert poly_coeff_norm(sq, math.inf) == 2
    assert poly_pow(q2, 1) == q2


@pytest.mark.parametrize("n", range(1, 11))
def test_central_binomial(n):
    # (x1^2 - x2^2)^n has coefficients +-C(n, k)
    assert poly_coeff_norm(poly_pow(make_Q(2), n), math.inf) == math.comb(n, n // 2)


@pytest.mark.parametrize("d,n", [(4, 2), (4, 3), (8, 2)])
def test_pow_matches_sympy(d, n):
    xs = sympy.symbols(f"x1:{d + 1}")
    ref = as_sympy_dict(sympy.expand(sympy_Q(d, xs) ** n), xs)
    assert poly_pow(make_Q(d), n).entries == ref


def test_pow_cap():
    with pytest.raises(ValueError, match="cap"):
        poly_pow(make_Q(8), 3, cap=100)


def test_coefficients_stay_integers():
    assert all(isinstance(c, int) for c in poly_pow(make_Q(4), 4).entries.values())


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4))
def test_pow_distributes_over_evaluation(seed, n):
    p = random_poly(seed)
    x = np.random.default_rng(seed + 1).uniform(-1.5, 1.5, size=(8, p.nvars))
    lhs = poly_pow(p, n).evaluate(x)
    rhs = p.evaluate(x) ** n
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.abs(rhs).max() + 1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), lam=st.floats(-3, 3, allow_nan=False))
def test_homogeneity(seed, lam):
    p = random_poly(seed, nvars=4, degree=5)
    x = np.random.default_rng(seed).standard_normal(4)
    assert p.evaluate(lam * x) == pytest.approx(lam**5 * p.evaluate(x), rel=1e-9, abs=1e-9)


# -- norms --------------------------------------------------------------------

def test_coeff_norm_examples():
    assert poly_coeff_norm(make_Q(2), math.inf) == 1
    assert poly_coeff_norm(make_Q(2), 2) == pytest.approx(math.sqrt(2))
    assert poly_coeff_norm(make_Q(2), 1) == 2


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), q=st.sampled_from([Fraction(4, 3), 2, 1, 3]))
def test_lq_dominates_sup_coefficient(seed, q):
    p = random_poly(seed)
    assert poly_coeff_norm(p, q) >= poly_coeff_norm(p, math.inf)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (2, 2)])
def test_eq_m_examples(m, n):
    r = check_eq_m(m, n)
    assert r["holds"]
    assert r["rhs"] == pytest.approx((2**n / (n + 1)) ** (2**m - 1))


def test_eq_m_values():
    assert check_eq_m(1, 2)["lhs"] == 2
    assert check_eq_m(2, 1)["lhs"] == 2


@pytest.mark.parametrize("d", [2, 4, 8])
def test_q_has_norm_one_on_cube(d):
    q = make_Q(d)
    assert grid_sup(q) == 1.0
    best, _ = sup_norm_poly(q, math.inf, starts=16, seed=d)
    assert best <= 1 + 1e-6


@pytest.mark.parametrize("d", [2, 4, 8])
@pytest.mark.parametrize("lp", [2, 4, 8])
def test_q_has_norm_one_on_lp(d, lp):
    q = make_Q(d)
    assert q.evaluate(np.eye(d)[0]) == 1.0
    best, arg = sup_norm_poly(q, lp, starts=16, seed=d)
    assert best <= 1 + 1e-6
    assert best == pytest.approx(1.0, abs=1e-6)


def test_json_round_trip():
    p = poly_pow(make_Q(4), 2)
    d = json.loads(p.to_json())
    assert d["nvars"] == 4 and d["degree"] == 8
    assert Polynomial.from_json(p.to_json()) == p


def test_embed_and_arithmetic():
    q = make_Q(2)
    e = q.embed(4, 2)
    assert e.entries == {(0, 0, 2, 0): 1, (0, 0, 0, 2): -1}
    with pytest.raises(ValueError):
        q.embed(2, 1)
    assert (q - q).entries == {}
    assert (q + q) == q.scale(2)
