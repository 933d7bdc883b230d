"""Show where the linearized SIR closed form drifts and what it converges to.

With s0 + i0 != 1 the closed form rests on the truncation e^(-mu t) ~ 1 - mu t,
so it is exact at t = 0, accurate for mu*t << 1, then drifts. The drift is not
unbounded noise: i_closed - i_ref converges to the constant C = s0 + i0 - 1,
because the closed form settles at lambda/beta while the true system settles
at (beta - mu)/beta, and those differ by exactly C.

Two other behaviors appear on the way:
  * past t = 1/mu the linear factor 1 - mu t goes negative and a
    TruncationBreakdownWarning fires (once per trajectory);
  * once s_closed leaves [0, 1] the nonphysical mask flags the rows.

Requires matplotlib. Writes output/02_sir_bias.png.
"""

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from epikin import (
    IntegratorConfig,
    ModelKind,
    SirParameters,
    TimeGrid,
    TruncationBreakdownWarning,
    asymptotic_bias,
    evaluate_closed_trajectory,
    integrate,
    sir_composites,
)

params = SirParameters(beta=0.8, mu=0.1, s0=0.7, i0=0.1)
grid = TimeGrid(0.0, 60.0, 601)
comps = sir_composites(params)
bias = asymptotic_bias(params)

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    closed = evaluate_closed_trajectory(ModelKind.SIR, params, grid)
ref = integrate(ModelKind.SIR, params, grid, IntegratorConfig(dt=1e-3))

drift = closed.i - ref.i
first_flag = closed.t[closed.nonphysical.argmax()] if closed.nonphysical.any() else None

print(f"parameters: beta={params.beta} mu={params.mu} s0={params.s0} i0={params.i0}")
print(f"C = {comps.c}, lambda = {comps.lam}")
print(f"closed-form asymptote lambda/beta = {comps.i_inf_closed}")
print(f"true endemic level (beta-mu)/beta = {comps.i_star_true}")
print(f"predicted bias C = {bias}, measured i gap at t=60: {drift[-1]:.6f}")
for w in caught:
    if issubclass(w.category, TruncationBreakdownWarning):
        print(f"warning fired: {w.message}")
print(f"first nonphysical grid point: t = {first_flag}")

fig, (ax_top, ax_bot) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)

ax_top.plot(closed.t, closed.i, color="tab:red", label="i closed form")
ax_top.plot(ref.t, ref.i, color="tab:red", ls="--", label="i reference")
ax_top.plot(closed.t, closed.s, color="tab:blue", label="s closed form")
ax_top.plot(ref.t, ref.s, color="tab:blue", ls="--", label="s reference")
ax_top.axhline(comps.i_inf_closed, color="tab:red", lw=0.8, ls=":")
ax_top.axhline(comps.i_star_true, color="gray", lw=0.8, ls=":")
if first_flag is not None:
    ax_top.axvspan(first_flag, closed.t[-1], color="orange", alpha=0.15,
                   label="nonphysical s > 1")
ax_top.set_ylabel("fraction of population")
ax_top.set_title("SIR with demography: linearized closed form vs reference")
ax_top.legend(fontsize=8, loc="center right")

ax_bot.plot(closed.t, drift, color="tab:purple", label="i closed - i ref")
ax_bot.axhline(bias, color="black", ls=":", lw=1, label=f"asymptotic bias C = {bias:g}")
ax_bot.set_xlabel("t")
ax_bot.set_ylabel("infective gap")
ax_bot.legend(fontsize=8)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.tight_layout()
fig.savefig(out / "02_sir_bias.png", dpi=120)
print(f"wrote {out / '02_sir_bias.png'}")
