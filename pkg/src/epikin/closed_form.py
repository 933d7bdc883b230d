"""Closed-form trajectories for both models.

The SIS solution i(t) = beta / (r + beta*C*exp(-beta*t)) is exact. The SIR
solution is not: its derivation replaces exp(-mu*t) by 1 - mu*t inside an
integrating factor, freezing the logistic coefficient at its t=0 value. The
result here is called the *linearized* closed form and its error is the
subject of the analysis module.

Degenerate parameters (beta = 0 for SIS, lambda = 0 for SIR) make the
standard formulas divide by zero. Both limits integrate to the same shape
i0 / (1 + a*i0*t); the SIS evaluator switches to it automatically, while the
SIR evaluator requires an explicit opt-in because the linearized formula is
already an approximation and silently changing branches would blur which
object is being measured.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EpikinError, LambdaZero, TruncationBreakdownWarning, ValidationError
from .models import (
    SAFE_EXP_BOUND,
    SirParameters,
    SisParameters,
    State,
    sir_composites,
    sis_composites,
)

__all__ = [
    "UNIT_SLACK",
    "ModelKind",
    "Provenance",
    "TimeGrid",
    "Trajectory",
    "nonphysical_mask",
    "sis_infective_exact",
    "sis_susceptible_exact",
    "sir_infective_closed",
    "sir_susceptible_closed",
    "evaluate_closed_trajectory",
]

# Slack above 1.0 before a fraction counts as non-physical, so that pure
# rounding noise on an exact solution never raises a flag.
UNIT_SLACK = 1e-9


class ModelKind(enum.Enum):
    SIS = "sis"
    SIR = "sir"


class Provenance(enum.Enum):
    CLOSED_FORM = "closed_form"
    REFERENCE = "reference"


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid from t_start to t_end inclusive, n_points >= 2."""

    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ValidationError("t_start and t_end must be finite")
        if not self.t_start < self.t_end:
            raise ValidationError(
                f"t_start must be below t_end, got [{self.t_start}, {self.t_end}]"
            )
        if not (isinstance(self.n_points, int) and self.n_points >= 2):
            raise ValidationError(f"n_points must be an integer >= 2, got {self.n_points!r}")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        """Grid times; first element is exactly t_start, last exactly t_end."""
        return np.linspace(self.t_start, self.t_end, self.n_points)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States sampled on a grid, tagged with model and provenance.

    ``diverged_at`` is the first index holding a non-finite value, or None
    when the whole trajectory is finite. ``nonphysical`` marks points that
    left the physically meaningful region (negative compartments, fractions
    above 1, infectives above k); values are stored as-is, never clamped.
    """

    grid: TimeGrid
    model: ModelKind
    provenance: Provenance
    s: np.ndarray
    i: np.ndarray
    nonphysical: np.ndarray
    diverged_at: int | None = field(init=False)

    def __post_init__(self) -> None:
        s = np.array(self.s, dtype=np.float64)
        i = np.array(self.i, dtype=np.float64)
        mask = np.array(self.nonphysical, dtype=bool)
        n = self.grid.n_points
        if not (s.shape == i.shape == mask.shape == (n,)):
            raise ValidationError(
                f"trajectory arrays must have shape ({n},) to match the grid"
            )
        for arr in (s, i, mask):
            arr.setflags(write=False)
        bad = ~(np.isfinite(s) & np.isfinite(i))
        diverged_at = int(np.argmax(bad)) if bad.any() else None
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "nonphysical", mask)
        object.__setattr__(self, "diverged_at", diverged_at)

    def __len__(self) -> int:
        return self.grid.n_points

    @property
    def t(self) -> np.ndarray:
        return self.grid.points()

    @property
    def states(self) -> tuple[State, ...]:
        return tuple(State(float(s), float(i)) for s, i in zip(self.s, self.i))

    def state_at(self, j: int) -> State:
        return State(float(self.s[j]), float(self.i[j]))


def nonphysical_mask(
    model: ModelKind,
    params: SisParameters | SirParameters,
    s: np.ndarray,
    i: np.ndarray,
) -> np.ndarray:
    """Boolean mask of points outside the physically meaningful region."""
    s = np.asarray(s, dtype=np.float64)
    i = np.asarray(i, dtype=np.float64)
    if model is ModelKind.SIS:
        return (s < 0.0) | (i < 0.0) | (i > params.k)
    return (s < 0.0) | (i < 0.0) | (s > 1.0 + UNIT_SLACK) | (i > 1.0 + UNIT_SLACK)


def sis_infective_exact(p: SisParameters, t: float) -> float:
    """Exact SIS infective level i(t) = beta / (r + beta*C*exp(-beta*t)).

    Switches automatically to the beta -> 0 limit i0 / (1 + r*i0*t) on
    degenerate input. The denominator is provably positive for 0 < i0 < k,
    so the function is total on valid input.
    """
    _check_time(t)
    try:
        comps = sis_composites(p)
    except EpikinError:
        return p.i0 / (1.0 + p.r * p.i0 * t)
    beta = comps.beta_sis
    if -beta * t > SAFE_EXP_BOUND:
        # Decaying epidemic (beta < 0) far in the tail: exp(-beta*t) would
        # overflow, so use the algebraically equal form exp(beta*t) / C.
        return math.exp(beta * t) / comps.c_sis
    return beta / (p.r + beta * comps.c_sis * math.exp(-beta * t))


def sis_susceptible_exact(p: SisParameters, t: float) -> float:
    """Exact SIS susceptible level, from conservation: k - i(t)."""
    return p.k - sis_infective_exact(p, t)


def sir_infective_closed(
    p: SirParameters, t: float, *, degenerate_limit: bool = False
) -> float:
    """Linearized SIR infective fraction.

    Evaluates lam / (beta + A*exp(-lam*t)) with A = (lam - i0*beta) / i0,
    which is the literal constant lam*D*exp(beta*C/mu) with the mutually
    cancelling exponentials removed; the literal route overflows for small
    mu while this one never does.

    Args:
        p: SIR parameters.
        t: time, >= 0.
        degenerate_limit: opt in to the analytic lam -> 0 limit
            i0 / (1 + beta*i0*t) instead of raising on degenerate input.

    Raises:
        LambdaZero: lam is degenerate and ``degenerate_limit`` is False.
    """
    _check_time(t)
    try:
        comps = sir_composites(p)
    except LambdaZero:
        if degenerate_limit:
            return p.i0 / (1.0 + p.beta * p.i0 * t)
        raise
    lam = comps.lam
    a = comps.d_cancelled
    if -lam * t > SAFE_EXP_BOUND:
        # lam < 0 far in the tail; same overflow guard as the SIS form.
        return lam / a * math.exp(lam * t)
    return lam / (p.beta + a * math.exp(-lam * t))


def sir_susceptible_closed(
    p: SirParameters, t: float, *, degenerate_limit: bool = False
) -> float:
    """Linearized SIR susceptible fraction 1 + C*(1 - mu*t) - i(t).

    May go negative for large t when C != 0; values are returned as-is.
    A TruncationBreakdownWarning is emitted once 1 - mu*t turns negative,
    since past that point the linearization has no justification left.
    """
    i_t = sir_infective_closed(p, t, degenerate_limit=degenerate_limit)
    return _sir_susceptible_from_infective(p, t, i_t)


def _sir_susceptible_from_infective(
    p: SirParameters, t: float, i_t: float, warn: bool = True
) -> float:
    # Shared by the scalar op and the trajectory loop so both produce
    # bitwise-identical values and reuse the already computed i(t). The
    # trajectory loop passes warn=False and emits one warning per grid
    # instead of one per point.
    c = p.s0 + p.i0 - 1.0
    linear_factor = 1.0 - p.mu * t
    if warn and _truncation_broken(c, linear_factor):
        warnings.warn(
            TruncationBreakdownWarning(
                f"1 - mu*t = {linear_factor:.6g} at t = {t:.6g}: the linearized "
                f"susceptible formula is outside its trust region (mu*t > 1)"
            ),
            stacklevel=3,
        )
    return 1.0 + c * linear_factor - i_t


def _truncation_broken(c: float, linear_factor: float) -> bool:
    return c != 0.0 and linear_factor < 0.0


def _check_time(t: float) -> None:
    if not (math.isfinite(t) and t >= 0.0):
        raise ValidationError(f"t must be finite and >= 0, got {t!r}")


def evaluate_closed_trajectory(
    model: ModelKind,
    params: SisParameters | SirParameters,
    grid: TimeGrid,
) -> Trajectory:
    """Sample the closed-form solution on a grid.

    Each point reuses the single infective evaluation (one exponential per
    time point) for the susceptible component, so trajectory values agree
    bitwise with the scalar operations.

    Raises:
        ValidationError: params do not match the model kind.
        LambdaZero: degenerate SIR input; the message names the first
            failing grid index.
    """
    _check_model_params(model, params)
    t_points = grid.points()
    s_arr = np.empty(grid.n_points)
    i_arr = np.empty(grid.n_points)
    first_broken: float | None = None
    for j, t in enumerate(t_points):
        t = float(t)
        try:
            if model is ModelKind.SIS:
                i_t = sis_infective_exact(params, t)
                s_t = params.k - i_t
            else:
                i_t = sir_infective_closed(params, t)
                s_t = _sir_susceptible_from_infective(params, t, i_t, warn=False)
                if first_broken is None and _truncation_broken(
                    params.s0 + params.i0 - 1.0, 1.0 - params.mu * t
                ):
                    first_broken = t
        except EpikinError as err:
            err.args = (f"{err.args[0]} (first failing grid index {j})",)
            raise
        s_arr[j] = s_t
        i_arr[j] = i_t
    if first_broken is not None:
        warnings.warn(
            TruncationBreakdownWarning(
                f"mu*t exceeds 1 from t = {first_broken:.6g} on; the linearized "
                f"susceptible formula is outside its trust region there"
            ),
            stacklevel=2,
        )
    return Trajectory(
        grid=grid,
        model=model,
        provenance=Provenance.CLOSED_FORM,
        s=s_arr,
        i=i_arr,
        nonphysical=nonphysical_mask(model, params, s_arr, i_arr),
    )


def _check_model_params(model: ModelKind, params: object) -> None:
    expected = SisParameters if model is ModelKind.SIS else SirParameters
    if not isinstance(params, expected):
        raise ValidationError(
            f"{model.value} trajectories need {expected.__name__}, "
            f"got {type(params).__name__}"
        )
