"""Lower bounds for Hardy--Littlewood and Bohnenblust--Hille constants.

Closed-form bounds (``bound_clarkson``, ``bound_dimant``, ``bound_gbh_*``,
``poly_lower_bound``) are pure formulas.  ``bound_numeric`` turns an
optimizer result into a bound: coefficient norm over the estimated form norm.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ._exponents import as_exponent, format_exponent, is_inf, split_rational
from .forms import (
    DEFAULT_EXPAND_LIMIT,
    FormExpr,
    expand_coeffs,
    make_littlewood,
    unit_count,
)
from .norms import ExponentVector, beta, coeff_lq, hl_exponent, mixed_norm, validate_exponents
from .optimizer import OptimizeResult, brute_force_linf_norm, clarkson_sup

__all__ = [
    "BoundRecord",
    "GBH3_UPPER",
    "bound_clarkson",
    "bound_dimant",
    "bound_gbh_jfapel",
    "bound_gbh_thispel",
    "bound_numeric",
    "bound_old",
    "poly_lower_bound",
    "poly_lower_bound_root",
    "records_to_csv",
    "thispel_identity",
    "verify_three_linear_optimal",
]

# Known upper bound C^R_{3,inf,q} <= 2^{3/4} for the three exponent vectors of
# verify_three_linear_optimal; quoted, not derived here.
GBH3_UPPER = 2 ** 0.75

CSV_COLUMNS = ("m", "p_num", "p_den", "method", "exponent", "numerator", "norm", "bound", "seed")


@dataclass
class BoundRecord:
    m: int
    p: object
    method: str
    exponent: object
    numerator: float
    norm: float
    bound: float
    provenance: dict = field(default_factory=dict)
    certified_bound: float | None = None
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = format_exponent(self.p)
        if isinstance(self.exponent, ExponentVector):
            d["exponent"] = [format_exponent(v) for v in self.exponent]
        else:
            d["exponent"] = format_exponent(self.exponent)
        return d

    def csv_row(self) -> dict:
        num, den = split_rational(self.p)
        exp = str(self.exponent) if isinstance(self.exponent, ExponentVector) else format_exponent(self.exponent)
        return {
            "m": self.m,
            "p_num": num,
            "p_den": den,
            "method": self.method,
            "exponent": exp,
            "numerator": repr(float(self.numerator)),
            "norm": repr(float(self.norm)),
            "bound": repr(float(self.bound)),
            "seed": self.provenance.get("seed", ""),
        }


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def _pow2(e) -> float:
    return 2.0 ** float(e)


def _clarkson_exponent(m, p):
    # (2mp + 2m - p - 2m^2) / (mp); limit (2m - 1)/m as p -> inf
    if is_inf(p):
        return Fraction(2 * m - 1, m)
    return (2 * m * p + 2 * m - p - 2 * m * m) / (m * p)


def bound_clarkson(m: int, p) -> BoundRecord:
    """``C_{R,m,p} >= 2^{(2mp+2m-p-2m^2)/(mp)} / ||T_{2,p}||`` for ``p >= 2m``.

    ``||T_{2,p}||`` is the Clarkson sup computed by :func:`clarkson_sup`.
    """
    m = int(m)
    p = as_exponent(p)
    if m < 2:
        raise ValueError("m must be >= 2")
    if p < 2 * m:
        raise ValueError(f"bound_clarkson needs p >= 2m, got p={p}, m={m}")
    num = _pow2(_clarkson_exponent(m, p))
    den = clarkson_sup(p)
    return BoundRecord(m, p, "clarkson", hl_exponent(m, p), num, den, num / den)


def bound_old(m: int, p) -> float:
    """Earlier closed form ``2^{(mp+2m-2m^2-p)/(mp)}`` (p > 2m)."""
    m = int(m)
    p = as_exponent(p)
    if is_inf(p):
        return _pow2(Fraction(m - 1, m))
    return _pow2((m * p + 2 * m - 2 * m * m - p) / (m * p))


def bound_dimant(m: int, p) -> BoundRecord:
    """``C_{R,m,p} >= 2^{(mp+2m-2m^2)/p} / ||T_{2,p}||`` for ``m < p < 2m``."""
    m = int(m)
    p = as_exponent(p)
    if m < 2:
        raise ValueError("m must be >= 2")
    if not m < p < 2 * m:
        raise ValueError(f"bound_dimant needs m < p < 2m, got p={p}, m={m}")
    num = _pow2((m * p + 2 * m - 2 * m * m) / p)
    den = clarkson_sup(p)
    return BoundRecord(m, p, "dimant", hl_exponent(m, p), num, den, num / den)


def _littlewood_norm_upper(m: int, p) -> float:
    """Rigorous ``||T_{m,p}|| <= 2^{m-2} ||T_{2,p}||``."""
    return 2.0 ** (m - 2) * clarkson_sup(p)


def bound_numeric(expr: FormExpr, m: int, p, norm: OptimizeResult, family: str | None = None,
                  limit: int = DEFAULT_EXPAND_LIMIT) -> BoundRecord:
    """``coeff_lq(T, rho(p, m)) / ||T||`` with ``||T||`` from an optimizer run.

    For forms whose coefficients are structurally all +-1 the numerator is
    ``N^{1/rho}`` from the analytic count ``N``, so no expansion is needed.
    The optimizer value is a lower estimate of ``||T||``, hence ``bound`` is
    an estimate from above of the true ratio.  When ``family == "littlewood"``
    the record also carries ``certified_bound`` using the rigorous norm upper
    bound ``2^{m-2} ||T_{2,p}||``.
    """
    m = int(m)
    p = as_exponent(p)
    if expr.degree != m:
        raise ValueError(f"form has degree {expr.degree}, m = {m}")
    if not norm.best_value > 0:
        raise ValueError("norm estimate must be positive")
    rho = hl_exponent(m, p)
    n_unit = unit_count(expr)
    if n_unit is not None:
        num = float(n_unit) ** (1.0 / float(rho))
    else:
        num = coeff_lq(expand_coeffs(expr, limit), rho)
    den = norm.best_value
    cfg = norm.config
    rec = BoundRecord(
        m, p, "numeric", rho, num, den, num / den,
        provenance={"seed": cfg.master_seed, "starts": cfg.starts, "sweep_tol": cfg.sweep_tol,
                    "max_sweeps": cfg.max_sweeps, "family": family or ""},
        note="norm is a multi-start lower estimate; bound is therefore an upper estimate of the ratio",
    )
    if family == "littlewood" and p >= 2:
        rec.certified_bound = num / _littlewood_norm_upper(m, p)
    return rec


def _check_alpha(alpha):
    a = as_exponent(alpha)
    if is_inf(a) or not 1 <= a <= 2:
        raise ValueError(f"alpha must lie in [1, 2], got {alpha}")
    return a


def bound_gbh_jfapel(m: int, alpha, ordering: str = "alpha_first") -> BoundRecord:
    """``C^R_{m,inf,q} >= 2^{(2m - alpha m - 4 + 3 alpha)/(2 alpha)}``.

    Attached to ``q = (alpha, beta_m, ..., beta_m)`` (``ordering="alpha_first"``)
    or, when ``alpha > 2m/(m+1)``, to the reordered ``q = (beta_m, ..., alpha)``
    (``ordering="alpha_last"``), the same value following by Minkowski.
    """
    m = int(m)
    a = _check_alpha(alpha)
    if ordering == "alpha_first":
        q = ExponentVector.gbh_alpha_first(m, a)
    elif ordering == "alpha_last":
        if not a > Fraction(2 * m, m + 1):
            raise ValueError("the alpha-last ordering needs alpha > 2m/(m+1)")
        q = ExponentVector.gbh_alpha_last(m, a)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    ok, msg = validate_exponents(q, m, math.inf)
    if not ok:
        raise ValueError(f"invalid exponent vector {q}: {msg}")
    value = _pow2((2 * m - a * m - 4 + 3 * a) / (2 * a))
    return BoundRecord(m, math.inf, "gbh_jfapel", q, value, 1.0, value,
                       provenance={"ordering": ordering})


def bound_gbh_thispel(m: int, alpha) -> BoundRecord:
    """``C^R_{m,inf,q} >= 2^{(3 alpha m - 2m - 5 alpha + 4)/(2 alpha (m-1))}``
    for ``q = (beta_m, ..., beta_m, alpha)``, witnessed by T_m."""
    m = int(m)
    a = _check_alpha(alpha)
    q = ExponentVector.gbh_alpha_last(m, a)
    ok, msg = validate_exponents(q, m, math.inf)
    if not ok:
        raise ValueError(f"invalid exponent vector {q}: {msg}")
    value = _pow2((3 * a * m - 2 * m - 5 * a + 4) / (2 * a * (m - 1)))
    num = _thispel_closed_form(m, a)
    return BoundRecord(m, math.inf, "gbh_thispel", q, num, 2.0 ** (m - 1), value)


def _thispel_closed_form(m, alpha, b=None):
    b = beta(m, alpha) if b is None else as_exponent(b)
    return (2.0 ** (2 * m - 3) * 2.0 ** float(b / alpha)) ** (1.0 / float(b))


def thispel_identity(m: int, alpha, b=None) -> tuple[float, float]:
    """Direct mixed norm of T_m at ``(b, ..., b, alpha)`` and the closed form
    ``(2^{2m-3} 2^{b/alpha})^{1/b}``; ``b`` defaults to ``beta_m``."""
    m = int(m)
    a = as_exponent(alpha)
    b = beta(m, a) if b is None else as_exponent(b)
    t = expand_coeffs(make_littlewood(m))
    direct = mixed_norm(t, (b,) * (m - 1) + (a,))
    return direct, _thispel_closed_form(m, a, b)


def verify_three_linear_optimal() -> list[dict]:
    """Lower bounds meeting the upper constant ``2^{3/4}`` for m = 3.

    One row per exponent vector:

    * ``(4/3, 4/3, 2)``: the alpha-last bound at alpha = 2, checked also by the
      direct ratio ``mixed_norm(T_3, q) / ||T_3||``;
    * ``(4/3, 8/5, 8/5)``: the alpha-first bound at alpha = 4/3;
    * ``(4/3, 2, 4/3)``: ``mixed_norm(T_3, q) / ||T_3|| = 2^{11/4} / 2^2``.

    ``||T_3|| = 4`` on l_inf comes from corner enumeration.
    """
    t3 = make_littlewood(3)
    coeffs = expand_coeffs(t3)
    norm_t3 = brute_force_linf_norm(t3)
    rows = []

    q1 = ExponentVector((Fraction(4, 3), Fraction(4, 3), 2))
    rec = bound_gbh_thispel(3, 2)
    direct = mixed_norm(coeffs, q1) / norm_t3
    rows.append(_optimal_row(q1, "thispel", rec.bound, {"direct_ratio": direct}))

    q2 = ExponentVector((Fraction(4, 3), Fraction(8, 5), Fraction(8, 5)))
    rec = bound_gbh_jfapel(3, Fraction(4, 3))
    assert rec.exponent == q2
    rows.append(_optimal_row(q2, "jfapel", rec.bound, {}))

    q3 = ExponentVector((Fraction(4, 3), 2, Fraction(4, 3)))
    mn = mixed_norm(coeffs, q3)
    rows.append(_optimal_row(q3, "direct_T3", mn / norm_t3, {"mixed_norm": mn, "norm": norm_t3}))
    return rows


def _optimal_row(q, mechanism, lower, extra):
    ok_q, msg = validate_exponents(q, 3, math.inf)
    checks = [lower] + [v for k, v in extra.items() if k == "direct_ratio"]
    passed = ok_q and all(abs(v - GBH3_UPPER) <= 1e-12 for v in checks)
    return {"q": str(q), "mechanism": mechanism, "lower": lower, "upper": GBH3_UPPER,
            "valid_q": ok_q, "passed": passed, **extra}


def poly_lower_bound(m: int, n: int) -> float:
    """``D_{R, n 2^m, p} >= (2^n/(n+1))^{2^m - 1}``."""
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    return (2.0**n / (n + 1)) ** (2**m - 1)


def poly_lower_bound_root(m: int, n: int) -> float:
    """Degree-normalised form ``(2^n/(n+1))^{(2^m - 1)/(n 2^m)}``; tends to
    ``2/(n+1)^{1/n}`` as ``m`` grows."""
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    return (2.0**n / (n + 1)) ** ((2**m - 1) / (n * 2**m))
