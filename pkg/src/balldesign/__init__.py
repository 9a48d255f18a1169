"""Locally D-optimal designs for non-linear regression on the unit ball."""

from .construct import (Design, FullParameter, canonical_design,
                        degenerate_design, design_from_record, design_record,
                        householder_matrix, rotated_design, simplex_vertices)
from .ellipsoid import (EllipsoidRegion, certify_on_region,
                        pull_back_parameter, push_forward_design)
from .infomat import (InfoMatrix, info_matrix_discrete, info_matrix_marginal,
                      log_det_objective)
from .intensity import (CanonicalProblem, ConditionReport, IntensityFamily,
                        check_conditions, log_deriv_ratio, parse_family, q)
from .lambertw import BranchDomainError, lambert_w
from .marginal import (MarginalSolution, SolveMethod, degenerate_design_flag,
                       negbin_beta1_of_x12, poisson_x12, poisson_x12_limit,
                       solve_x12, x12_infinite_dim)
from .verify import (Certificate, brute_force_marginal, certify,
                     grid_argmax_x12, sensitivity, sphere_grid)

__version__ = "0.1.0"

__all__ = [
    "BranchDomainError",
    "CanonicalProblem",
    "Certificate",
    "ConditionReport",
    "Design",
    "EllipsoidRegion",
    "FullParameter",
    "InfoMatrix",
    "IntensityFamily",
    "MarginalSolution",
    "SolveMethod",
    "brute_force_marginal",
    "canonical_design",
    "certify",
    "certify_on_region",
    "check_conditions",
    "degenerate_design",
    "degenerate_design_flag",
    "design_from_record",
    "design_record",
    "grid_argmax_x12",
    "householder_matrix",
    "info_matrix_discrete",
    "info_matrix_marginal",
    "lambert_w",
    "log_det_objective",
    "log_deriv_ratio",
    "negbin_beta1_of_x12",
    "parse_family",
    "poisson_x12",
    "poisson_x12_limit",
    "pull_back_parameter",
    "push_forward_design",
    "q",
    "rotated_design",
    "sensitivity",
    "simplex_vertices",
    "solve_x12",
    "sphere_grid",
    "x12_infinite_dim",
]
