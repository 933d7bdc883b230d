"""Error measurement between closed-form and reference trajectories.

The SIS closed form should agree with the reference to integrator accuracy;
the SIR closed form should not, and the functions here put numbers on how it
fails: pointwise discrepancies, the residual left in the governing ODE, a
proven bound on the truncation that caused it, the time horizon inside which
the approximation stays within a tolerance, and its exact long-time bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import (
    ModelKind,
    TimeGrid,
    Trajectory,
    Provenance,
    evaluate_closed_trajectory,
    sir_infective_closed,
    sir_susceptible_closed,
    sis_infective_exact,
    sis_susceptible_exact,
)
from .errors import GridMismatch, ValidationError
from .models import (
    SirParameters,
    SisParameters,
    State,
    sir_composites,
    sir_rhs,
    sis_rhs,
)
from .reference import IntegratorConfig, integrate

__all__ = [
    "ErrorReport",
    "compare",
    "ode_residual",
    "linearization_bound",
    "validity_horizon",
    "asymptotic_bias",
]

# Points where the relative-error denominator is at or below this are left
# out of max_rel_i; relative error is meaningless against a vanishing i.
REL_GUARD = 1e-12

# Scan resolution for validity_horizon before bisection refines the bracket.
_HORIZON_SCAN_POINTS = 2001


@dataclass(frozen=True)
class ErrorReport:
    """Discrepancy summary between two trajectories on a shared grid.

    Attributes:
        max_abs_s: max |s_a - s_b| over the grid.
        max_abs_i: max |i_a - i_b| over the grid.
        max_rel_i: max |i_a - i_b| / denominator over guarded points, where
            the denominator is the reference i when exactly one trajectory
            is a reference run and the pointwise larger |i| otherwise (so
            the measure stays symmetric in its arguments).
        l2_i: root-mean-square of i_a - i_b.
        argmax_t: grid time where max_abs_i is attained (first if tied).
        horizon: earliest grid time with |i_a - i_b| > eps, None if never.
    """

    max_abs_s: float
    max_abs_i: float
    max_rel_i: float
    l2_i: float
    argmax_t: float
    horizon: float | None


def compare(a: Trajectory, b: Trajectory, eps: float = 1e-3) -> ErrorReport:
    """Compare two trajectories pointwise; symmetric in (a, b).

    Raises:
        GridMismatch: the trajectories do not share grid and model kind.
    """
    if a.grid != b.grid or a.model != b.model:
        raise GridMismatch(
            f"cannot compare ({a.model.value}, {a.grid}) against "
            f"({b.model.value}, {b.grid})"
        )
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    t = a.t
    d_s = np.abs(a.s - b.s)
    d_i = np.abs(a.i - b.i)
    if (a.provenance is Provenance.REFERENCE) != (b.provenance is Provenance.REFERENCE):
        ref = a if a.provenance is Provenance.REFERENCE else b
        denom = np.abs(ref.i)
    else:
        denom = np.maximum(np.abs(a.i), np.abs(b.i))
    guarded = denom > REL_GUARD
    max_rel_i = float(np.max(d_i[guarded] / denom[guarded])) if guarded.any() else 0.0
    exceed = np.nonzero(d_i > eps)[0]
    horizon = float(t[exceed[0]]) if exceed.size else None
    j = int(np.argmax(d_i))
    return ErrorReport(
        max_abs_s=float(np.max(d_s)),
        max_abs_i=float(d_i[j]),
        max_rel_i=max_rel_i,
        l2_i=float(np.sqrt(np.mean(d_i * d_i))),
        argmax_t=float(t[j]),
        horizon=horizon,
    )


def ode_residual(
    model: ModelKind,
    params: SisParameters | SirParameters,
    t: float,
    h: float = 1e-5,
) -> State:
    """How far the closed form is from satisfying the model ODE at time t.

    Differentiates the closed form by central difference with step h and
    subtracts the model right-hand side evaluated on the closed-form state.
    For the exact SIS solution the residual is pure finite-difference noise;
    for SIR with C != 0 the i component exposes the frozen logistic
    coefficient (the true coefficient decays like exp(-mu*t), the linearized
    one does not).

    Args:
        model: which system to measure against.
        params: parameters matching the model.
        t: evaluation time, must satisfy t >= h.
        h: central-difference step, > 0.
    """
    if not h > 0:
        raise ValidationError(f"h must be positive, got {h!r}")
    if not t >= h:
        raise ValidationError(f"need t >= h to difference, got t={t!r}, h={h!r}")
    if model is ModelKind.SIS:
        s_of, i_of, rhs = sis_susceptible_exact, sis_infective_exact, sis_rhs
    else:
        s_of, i_of, rhs = sir_susceptible_closed, sir_infective_closed, sir_rhs
    ds = (s_of(params, t + h) - s_of(params, t - h)) / (2.0 * h)
    di = (i_of(params, t + h) - i_of(params, t - h)) / (2.0 * h)
    deriv = rhs(params, State(s_of(params, t), i_of(params, t)))
    return State(ds - deriv.s, di - deriv.i)


def linearization_bound(mu: float, t: float) -> float:
    """Proven bound (mu*t)**2 / 2 on the truncation |exp(-mu*t) - (1 - mu*t)|.

    Holds for every mu*t >= 0: the truncation g(x) = exp(-x) - 1 + x is
    non-negative (convexity) and g'(x) = 1 - exp(-x) <= x, so g(x) <= x**2/2.
    The bound is sharp near 0 and vacuous once mu*t is of order 1, which is
    exactly where the linearized closed form stops being trustworthy.
    """
    if not (mu >= 0 and t >= 0):
        raise ValidationError(f"need mu >= 0 and t >= 0, got mu={mu!r}, t={t!r}")
    x = mu * t
    return 0.5 * x * x


def validity_horizon(
    params: SisParameters | SirParameters,
    eps: float,
    t_max: float,
    cfg: IntegratorConfig | None = None,
) -> float | None:
    """Earliest time where |i_closed - i_reference| exceeds eps on [0, t_max].

    Scans a uniform grid first, then bisects between the bracketing grid
    points down to a width of 1e-6 * t_max. Every bisection probe integrates
    the reference afresh from 0 to the probe time, so no interpolation error
    enters the refined value. Returns None when the threshold is never
    exceeded; for the SIS model that is the expected outcome at any eps
    above integrator accuracy, since its closed form is exact.

    Args:
        params: SIS or SIR parameters; the model is inferred from the type.
        eps: discrepancy threshold, > 0.
        t_max: end of the search window, > 0.
        cfg: integrator settings for the reference runs.
    """
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    if not t_max > 0:
        raise ValidationError(f"t_max must be positive, got {t_max!r}")
    if cfg is None:
        cfg = IntegratorConfig()
    model = ModelKind.SIS if isinstance(params, SisParameters) else ModelKind.SIR
    grid = TimeGrid(0.0, t_max, _HORIZON_SCAN_POINTS)
    closed = evaluate_closed_trajectory(model, params, grid)
    ref = integrate(model, params, grid, cfg)
    gap = np.abs(closed.i - ref.i)
    exceed = np.nonzero(gap > eps)[0]
    if exceed.size == 0:
        return None
    j = int(exceed[0])
    t_points = grid.points()
    if j == 0:
        return float(t_points[0])

    def gap_at(t: float) -> float:
        if model is ModelKind.SIS:
            i_c = sis_infective_exact(params, t)
        else:
            i_c = sir_infective_closed(params, t)
        i_r = integrate(model, params, TimeGrid(0.0, t, 2), cfg).i[-1]
        return abs(i_c - i_r)

    lo, hi = float(t_points[j - 1]), float(t_points[j])
    width_target = 1e-6 * t_max
    while hi - lo > width_target:
        mid = 0.5 * (lo + hi)
        if gap_at(mid) > eps:
            hi = mid
        else:
            lo = mid
    return hi


def asymptotic_bias(p: SirParameters) -> float:
    """Exact long-time error of the linearized SIR closed form.

    The closed form settles at lam/beta while the true system settles at
    (beta - mu)/beta; the difference is the sum-law constant C = s0 + i0 - 1.
    Requires lam > 0 and beta > mu so that both asymptotes exist and are
    positive.

    Raises:
        ValidationError: preconditions on lam and beta/mu fail.
        LambdaZero: degenerate lam.
    """
    comps = sir_composites(p)
    if not (comps.lam > 0 and p.beta > p.mu):
        raise ValidationError(
            f"asymptotic bias needs lam > 0 and beta > mu, got lam={comps.lam!r}, "
            f"beta={p.beta!r}, mu={p.mu!r}"
        )
    return comps.c
