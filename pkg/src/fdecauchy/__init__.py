"""Solvability analysis for Cauchy problems with two-point positive operators."""

from .criteria import (
    NormData,
    Verdict,
    amax_cond3,
    bmax_cond2,
    check_cor2_cond1,
    check_cor2_cond2,
    check_cor2_cond3,
    check_corollary1,
    check_theorem1,
    check_theorem2,
    min_q_on_unit_interval,
    quadratic_q,
)
from .determinant import (
    DeterminantConfig,
    MinimumReport,
    ThresholdReport,
    branch_threshold,
    delta,
    delta_via_determinant,
    min_delta_analytic,
    min_delta_grid,
    min_delta_grid_general,
    reconcile_thresholds,
)
from .equations import (
    FullOperatorPair,
    NotOnBoundary,
    SingularProblem,
    TwoPointProblem,
    construct_counterexample,
    homogeneous_nullspace,
    homogeneous_solution,
    integral,
    problem_delta,
    problem_from_json,
    problem_to_json,
    residual,
    saturate_operators,
    solution_from_json,
    solution_to_json,
    solve_two_point,
)
from .quasilinear import (
    NoConvergence,
    Nonlinearity,
    a_priori_bound,
    from_pointwise,
    power_nonlinearity,
    quasilinear_residual,
    solve_quasilinear,
    tanh_nonlinearity,
)
from .stepfun import PiecewiseLinear, StepFunction, merge_breaks, two_piece

__version__ = "0.1.0"
