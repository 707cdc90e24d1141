"""Jain and Phillips-type positive linear operators.

Exact rational arithmetic for the moment polynomials and their
recurrences, overflow-safe basis evaluation, closed hypergeometric moment
integrals with independent quadrature oracles, numerical operator
application, differential-identity verification, and convergence
experiments.
"""

from .basis import JainParams, basis_moment_integral, basis_partial_sum, jain_basis
from .config import CONFIG_ENV_VAR, SeriesQuadConfig, load_config
from .errors import DomainError, QuadratureError, RangeError, TruncationError
from .exactpoly import ExactPoly, ExpPoly, poly_add, poly_eval, poly_mul, poly_sub
from .functions import (
    BOUNDED_BUILTIN_NAMES,
    BUILTIN_NAMES,
    TestFunction,
    builtin_function,
    monomial,
)
from .identities import (
    ConvergenceReport,
    check_basis_beta_derivative,
    check_basis_diff_identity,
    check_ratio_beta_derivative,
    check_t_moment_diff_identity,
    korovkin_convergence_table,
    minimal_smoothness_constant,
    modulus_of_continuity,
    ratio_beta_identity_residual,
    smoothness_bound_check,
    smoothness_bound_peetre_radius,
    t_moment_identity_residual,
    voronovskaja_experiment,
    voronovskaja_limit,
)
from .moments import (
    asymptotic_derivative_coefficients,
    central_moment_closed,
    central_moment_derived,
    central_moment_discrepancy,
    central_moment_exp_coefficient,
    expfree_coefficient,
    expfree_moment_closed,
    expfree_moment_recur,
    f_recurrence_coefficient,
    f_recurrence_coefficient_quoted,
    jain_moment_closed,
    large_n_limit,
    ratio_poly_closed,
    ratio_poly_recur,
    t_moment_closed,
    t_moment_general,
)
from .numerics import (
    hyp1f1_terminating,
    integrate_halfline,
    pochhammer,
    tricomi_u_oracle,
)
from .operators import (
    apply_jain,
    apply_phillips,
    central_moment_series,
    t_moment_series,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDED_BUILTIN_NAMES",
    "BUILTIN_NAMES",
    "CONFIG_ENV_VAR",
    "ConvergenceReport",
    "DomainError",
    "ExactPoly",
    "ExpPoly",
    "JainParams",
    "QuadratureError",
    "RangeError",
    "SeriesQuadConfig",
    "TestFunction",
    "TruncationError",
    "apply_jain",
    "apply_phillips",
    "asymptotic_derivative_coefficients",
    "basis_moment_integral",
    "basis_partial_sum",
    "builtin_function",
    "central_moment_closed",
    "central_moment_derived",
    "central_moment_discrepancy",
    "central_moment_exp_coefficient",
    "central_moment_series",
    "check_basis_beta_derivative",
    "check_basis_diff_identity",
    "check_ratio_beta_derivative",
    "check_t_moment_diff_identity",
    "expfree_coefficient",
    "expfree_moment_closed",
    "expfree_moment_recur",
    "f_recurrence_coefficient",
    "f_recurrence_coefficient_quoted",
    "hyp1f1_terminating",
    "integrate_halfline",
    "jain_basis",
    "jain_moment_closed",
    "korovkin_convergence_table",
    "large_n_limit",
    "load_config",
    "minimal_smoothness_constant",
    "modulus_of_continuity",
    "monomial",
    "pochhammer",
    "poly_add",
    "poly_eval",
    "poly_mul",
    "poly_sub",
    "ratio_beta_identity_residual",
    "ratio_poly_closed",
    "ratio_poly_recur",
    "smoothness_bound_check",
    "smoothness_bound_peetre_radius",
    "t_moment_closed",
    "t_moment_general",
    "t_moment_identity_residual",
    "t_moment_series",
    "tricomi_u_oracle",
    "voronovskaja_experiment",
    "voronovskaja_limit",
]
