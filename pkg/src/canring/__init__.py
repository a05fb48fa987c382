"""Exact computer algebra for canonical rings of surfaces with K^2 = 7, p_g = 4."""

from ._qq import BACKEND, QQ
from .groebner import (
    ReducedGB,
    divide,
    divide_by_variable,
    eliminate,
    groebner,
    ideal_contains,
    ideal_equal,
    normal_form,
)
from .linalg import (
    GradedDims,
    TwistedPresentation,
    cokernel_dims,
    hilbert_match,
    minimal_generator_degrees,
    quotient_dims,
    rank_condition_lift,
)
from .matrix import (
    PolyMatrix,
    adjugate,
    amta_product,
    determinant,
    is_extrasymmetric,
    minors,
    pfaffian,
    reassemble,
    roll,
    sub_pfaffians,
)
from .order import MonomialOrder, block, grevlex, lex
from .poly import (
    InhomogeneousError,
    ParseError,
    Poly,
    RingMismatchError,
    RingSpec,
    ZeroPolynomialError,
    parse_poly,
    weighted_degree,
)

__version__ = "0.1.0"
