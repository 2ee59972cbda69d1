"""Joint approximation of a function and its derivative by alternative
orthogonal polynomials on [0, 1], plus the structured polynomial system."""

__version__ = "0.1.0"

from .apoly import (
    ASystem,
    BSystem,
    a_derivative,
    a_eval,
    build_a_system,
    build_b_system,
    gram_matrix,
    shifted_orthogonality_check,
)
from .operators import (
    Expansion,
    FuncSpec,
    derivative_of,
    funcspec,
    omega_hat,
    omega_spectral,
    omega_weak,
    w_discrete,
    w_hat,
)
from .poly import RationalPoly
from .quadrature import QuadratureRule, gauss_rule
