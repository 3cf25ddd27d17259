"""Finite-instance toolkit for generalized-convexity minimax analysis."""

from .alternative import AlternativeOutcome, FunctionFamily, decide_alternative, dual_cone_membership, verify_certificate
from .construct import (
    InfConvInstance,
    delta_set_value,
    gen_instance,
    inf_convolution,
    lipschitz_transfer_check,
    phi_from_xi,
    star_conjugate,
    sup_convolution,
)
from .core import DEFAULT_TOL, BiMatrix, IndexSequence, Tolerance, validate_bimatrix, validate_weights
from .genconvex import (
    ConvexityReport,
    check_prop22,
    dense_coefficients,
    fact1_witness,
    infsup_convex_value,
    is_infsup_convex,
    is_s_concavelike,
    is_supinf_concave,
    is_t_convexlike,
    supinf_concave_value,
)
from .lp import GameSolution, LpProblem, LpSolution, Status, solve_lp, solve_zero_sum, verify_lp_solution
from .mazur import MazurResult, SampledSequence, mazur_extract, mazur_schedule, pointwise_decay_report
from .minimax import (
    TheoremCheck,
    ValueReport,
    check_app2,
    check_cor_equic,
    check_km1,
    check_km2,
    check_lem2,
    limsup_over_sequence,
    pure_values,
    simons_like_check,
    value_report,
    witness_row,
)

__version__ = "0.1.0"
