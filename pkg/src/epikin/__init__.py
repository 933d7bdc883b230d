"""Closed-form SIS and SIR epidemic trajectories with a reference oracle.

The SIS solution is exact and the package proves it numerically; the SIR
solution is a linearized approximation and the package measures where and
how it fails: pointwise error, ODE residual, validity horizon, and the
exact long-time bias C = s0 + i0 - 1.
"""

from .analysis import (
    ErrorReport,
    asymptotic_bias,
    compare,
    linearization_bound,
    ode_residual,
    validity_horizon,
)
from .closed_form import (
    ModelKind,
    Provenance,
    TimeGrid,
    Trajectory,
    evaluate_closed_trajectory,
    nonphysical_mask,
    sir_infective_closed,
    sir_susceptible_closed,
    sis_infective_exact,
    sis_susceptible_exact,
)
from .errors import (
    BetaZero,
    EpikinError,
    GridMismatch,
    LambdaZero,
    NonFinite,
    ParseError,
    StepSizeInsufficient,
    TruncationBreakdownWarning,
    UnknownField,
    ValidationError,
)
from .models import (
    SirComposites,
    SirParameters,
    SisComposites,
    SisParameters,
    State,
    sir_composites,
    sir_rhs,
    sis_composites,
    sis_rhs,
)
from .reference import IntegratorConfig, integrate, rk4_step

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # models
    "State",
    "SisParameters",
    "SisComposites",
    "SirParameters",
    "SirComposites",
    "sis_rhs",
    "sir_rhs",
    "sis_composites",
    "sir_composites",
    # closed forms
    "ModelKind",
    "Provenance",
    "TimeGrid",
    "Trajectory",
    "sis_infective_exact",
    "sis_susceptible_exact",
    "sir_infective_closed",
    "sir_susceptible_closed",
    "evaluate_closed_trajectory",
    "nonphysical_mask",
    # reference integrator
    "IntegratorConfig",
    "rk4_step",
    "integrate",
    # analysis
    "ErrorReport",
    "compare",
    "ode_residual",
    "linearization_bound",
    "validity_horizon",
    "asymptotic_bias",
    # errors
    "EpikinError",
    "ValidationError",
    "ParseError",
    "UnknownField",
    "GridMismatch",
    "BetaZero",
    "LambdaZero",
    "NonFinite",
    "StepSizeInsufficient",
    "TruncationBreakdownWarning",
]
