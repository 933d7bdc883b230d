"""Independent fixed-step RK4 integration of both model systems.

This is the oracle the closed forms are measured against, so it shares no
algebra with them: it steps the raw right-hand sides and nothing else.
Classical RK4 with a fixed step was chosen over an adaptive pair because it
is fully deterministic (bitwise-identical trajectories across runs) and the
systems are non-stiff at the parameter scales of interest; accuracy is
checked by an optional step-halving pass instead of an embedded estimate.

The per-interval loops are compiled with numba. The kernels repeat the
arithmetic of :func:`rk4_step` applied to the model right-hand sides
operation for operation, so compiled and interpreted paths agree bitwise;
the test suite asserts that equivalence directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .closed_form import (
    ModelKind,
    Provenance,
    TimeGrid,
    Trajectory,
    _check_model_params,
    nonphysical_mask,
)
from .errors import NonFinite, StepSizeInsufficient, ValidationError
from .models import SirParameters, SisParameters, State

__all__ = ["IntegratorConfig", "rk4_step", "integrate"]


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    Attributes:
        dt: base step size. Intervals narrower than dt are taken in one step.
        halving_check: when True, integrate again at dt/2 and require the two
            runs to agree at every grid point.
        tolerance: largest acceptable per-grid-point discrepancy between the
            dt and dt/2 runs.
    """

    dt: float = 1e-3
    halving_check: bool = False
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be positive, got {self.dt!r}")
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise ValidationError(f"tolerance must be positive, got {self.tolerance!r}")


def rk4_step(
    rhs: Callable[[State, float], State], x: State, t: float, dt: float
) -> State:
    """One classical four-stage RK4 step of an arbitrary two-component system.

    Args:
        rhs: derivative function (state, time) -> derivative state.
        x: current state.
        t: current time.
        dt: step size, > 0.

    Raises:
        NonFinite: a stage or the updated state is not finite.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt!r}")
    k1 = rhs(x, t)
    k2 = rhs(State(x.s + 0.5 * dt * k1.s, x.i + 0.5 * dt * k1.i), t + 0.5 * dt)
    k3 = rhs(State(x.s + 0.5 * dt * k2.s, x.i + 0.5 * dt * k2.i), t + 0.5 * dt)
    k4 = rhs(State(x.s + dt * k3.s, x.i + dt * k3.i), t + dt)
    out = State(
        x.s + (dt / 6.0) * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
        x.i + (dt / 6.0) * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i),
    )
    for stage in (k1, k2, k3, k4, out):
        if not (math.isfinite(stage.s) and math.isfinite(stage.i)):
            raise NonFinite(f"non-finite RK4 stage at t = {t!r} with dt = {dt!r}")
    return out


# The kernels below must stay textually parallel to rk4_step composed with
# sis_rhs / sir_rhs: same expressions, same evaluation order, no fastmath,
# so that results are bitwise equal to the interpreted path.


@njit(cache=True)
def _sis_rk4_interval(r, alpha, s, i, h, n):  # pragma: no cover - compiled
    for _ in range(n):
        k1s = -r * s * i + alpha * i
        k1i = r * s * i - alpha * i
        s2 = s + 0.5 * h * k1s
        i2 = i + 0.5 * h * k1i
        k2s = -r * s2 * i2 + alpha * i2
        k2i = r * s2 * i2 - alpha * i2
        s3 = s + 0.5 * h * k2s
        i3 = i + 0.5 * h * k2i
        k3s = -r * s3 * i3 + alpha * i3
        k3i = r * s3 * i3 - alpha * i3
        s4 = s + h * k3s
        i4 = i + h * k3i
        k4s = -r * s4 * i4 + alpha * i4
        k4i = r * s4 * i4 - alpha * i4
        s = s + (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + (h / 6.0) * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
    return s, i


@njit(cache=True)
def _sir_rk4_interval(beta, mu, s, i, h, n):  # pragma: no cover - compiled
    for _ in range(n):
        k1s = -beta * s * i - mu * s + mu
        k1i = beta * s * i - mu * i
        s2 = s + 0.5 * h * k1s
        i2 = i + 0.5 * h * k1i
        k2s = -beta * s2 * i2 - mu * s2 + mu
        k2i = beta * s2 * i2 - mu * i2
        s3 = s + 0.5 * h * k2s
        i3 = i + 0.5 * h * k2i
        k3s = -beta * s3 * i3 - mu * s3 + mu
        k3i = beta * s3 * i3 - mu * i3
        s4 = s + h * k3s
        i4 = i + h * k3i
        k4s = -beta * s4 * i4 - mu * s4 + mu
        k4i = beta * s4 * i4 - mu * i4
        s = s + (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i = i + (h / 6.0) * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
    return s, i


def _substeps(spacing: float, dt: float) -> int:
    """Steps per grid interval so the last sub-step lands on the grid point."""
    ratio = spacing / dt
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= 1e-12 * max(1.0, ratio):
        return int(nearest)
    return max(1, math.ceil(ratio))


def _run(
    model: ModelKind,
    params: SisParameters | SirParameters,
    t_points: np.ndarray,
    n_sub: int,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    if model is ModelKind.SIS:
        kernel, a, b = _sis_rk4_interval, params.r, params.alpha
        s, i = params.k - params.i0, params.i0
    else:
        kernel, a, b = _sir_rk4_interval, params.beta, params.mu
        s, i = params.s0, params.i0
    n = len(t_points)
    s_arr = np.empty(n)
    i_arr = np.empty(n)
    s_arr[0], i_arr[0] = s, i
    for j in range(1, n):
        s, i = kernel(a, b, s, i, h, n_sub)
        if not (math.isfinite(s) and math.isfinite(i)):
            raise NonFinite(
                f"integration diverged by t = {float(t_points[j])!r} "
                f"(grid index {j}, step {h!r})"
            )
        s_arr[j], i_arr[j] = s, i
    return s_arr, i_arr


def integrate(
    model: ModelKind,
    params: SisParameters | SirParameters,
    grid: TimeGrid,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate a model system over a grid with fixed-step RK4.

    Each grid interval is split into ceil(spacing / dt) equal sub-steps
    (a single step when dt does not fit), so the integrator lands exactly
    on every grid point and never interpolates.

    When ``cfg.halving_check`` is on, the system is integrated a second
    time at half the step and the two runs must agree at every grid point
    within ``cfg.tolerance``; the returned trajectory is always the
    base-step run, so the flag changes verification only, never values.

    Raises:
        NonFinite: the state stopped being finite.
        StepSizeInsufficient: the halving check failed; the message names
            the worst grid point.
    """
    _check_model_params(model, params)
    if cfg is None:
        cfg = IntegratorConfig()
    t_points = grid.points()
    n_sub = _substeps(grid.spacing, cfg.dt)
    h = grid.spacing / n_sub
    s_arr, i_arr = _run(model, params, t_points, n_sub, h)
    if cfg.halving_check:
        s_half, i_half = _run(model, params, t_points, 2 * n_sub, 0.5 * h)
        gap = np.maximum(np.abs(s_arr - s_half), np.abs(i_arr - i_half))
        worst = int(np.argmax(gap))
        if gap[worst] > cfg.tolerance:
            raise StepSizeInsufficient(
                f"step halving changed the solution by {gap[worst]:.3e} at "
                f"t = {float(t_points[worst])!r} (tolerance {cfg.tolerance:.3e}); "
                f"reduce dt below {cfg.dt!r}"
            )
    return Trajectory(
        grid=grid,
        model=model,
        provenance=Provenance.REFERENCE,
        s=s_arr,
        i=i_arr,
        nonphysical=nonphysical_mask(model, params, s_arr, i_arr),
    )
