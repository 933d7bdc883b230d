"""Error and warning types shared across the package.

Every error carries a stable ``category`` token. The command line front-end
prints that token as the first line on stderr and maps it to an exit code,
so the strings here are part of the external contract and must not change
casually.
"""

from __future__ import annotations

__all__ = [
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


class EpikinError(Exception):
    """Base class for all package errors."""

    category: str = "Error"


class ValidationError(EpikinError):
    """A parameter or configuration value violates an invariant."""

    category = "ValidationError"


class ParseError(EpikinError):
    """A scenario document is not well-formed."""

    category = "ParseError"


class UnknownField(ValidationError):
    """A sweep names a field the active model does not have."""

    category = "UnknownField"


class GridMismatch(EpikinError):
    """Two trajectories being compared do not share a grid and model."""

    category = "GridMismatch"


class BetaZero(EpikinError):
    """rk - alpha is degenerate; the standard closed form divides by it."""

    category = "BetaZero"


class LambdaZero(EpikinError):
    """The logistic rate lambda is degenerate; the closed form is undefined."""

    category = "LambdaZero"


class NonFinite(EpikinError):
    """Integration produced a non-finite value."""

    category = "NonFinite"


class StepSizeInsufficient(EpikinError):
    """The step-halving check found a discrepancy above tolerance."""

    category = "StepSizeInsufficient"


class TruncationBreakdownWarning(UserWarning):
    """The linearized susceptible formula left its trust region (mu*t > 1).

    Past that point 1 - mu*t is negative while the factor it replaces,
    exp(-mu*t), is positive, so the linearized s(t) can leave [0, 1].
    """
