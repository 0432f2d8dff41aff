"""Lower bounds for Hardy--Littlewood and Bohnenblust--Hille constants.

Explicit multilinear forms and homogeneous polynomials, their norms on
l_p spaces (multi-start alternating maximization), coefficient and mixed
norms, and the closed-form lower-bound formulas built on them.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundRecord,
    bound_clarkson,
    bound_dimant,
    bound_gbh_jfapel,
    bound_gbh_thispel,
    bound_numeric,
    bound_old,
    poly_lower_bound,
    poly_lower_bound_root,
    verify_three_linear_optimal,
)
from .forms import (
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
)
from .norms import ExponentVector, coeff_lq, hl_exponent, mixed_norm, validate_exponents
from .optimizer import (
    OptimizeConfig,
    OptimizeResult,
    alternating_ascent,
    brute_force_linf_norm,
    clarkson_sup,
    dual_argmax,
    sup_norm,
)
from .polynomials import Polynomial, check_eq_m, make_Q, poly_coeff_norm, poly_pow
