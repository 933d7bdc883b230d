"""Measure how long the linearized SIR closed form stays within tolerance.

validity_horizon bisects for the earliest t where |i_closed - i_ref| exceeds
eps. Sweeping eps maps out the error-growth curve from the outside: tighter
tolerances are exhausted earlier. The second panel checks the a-priori
truncation bound |e^(-mu t) - (1 - mu t)| <= (mu t)^2 / 2 that underlies the
whole construction: the actual truncation error hugs the bound for small mu*t
and falls below it later.

Requires matplotlib. Writes output/03_horizon.png.
"""

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from epikin import (
    SirParameters,
    TruncationBreakdownWarning,
    linearization_bound,
    validity_horizon,
)

params = SirParameters(beta=0.8, mu=0.1, s0=0.7, i0=0.1)
t_max = 50.0

eps_values = np.logspace(-5, -1, 9)
horizons = []
warnings.simplefilter("ignore", TruncationBreakdownWarning)
for eps in eps_values:
    h = validity_horizon(params, eps=float(eps), t_max=t_max)
    horizons.append(h)
    shown = "none (never exceeded)" if h is None else f"{h:.4f}"
    print(f"eps = {eps:.1e}  ->  horizon = {shown}")

fig, (ax_left, ax_right) = plt.subplots(1, 2, figsize=(10, 4))

kept = [(e, h) for e, h in zip(eps_values, horizons) if h is not None]
ax_left.loglog([e for e, _ in kept], [h for _, h in kept], "o-", color="tab:blue")
ax_left.set_xlabel("tolerance eps")
ax_left.set_ylabel("validity horizon t(eps)")
ax_left.set_title(f"horizon for beta={params.beta}, mu={params.mu}")
ax_left.grid(True, which="both", lw=0.3)

t = np.linspace(0.0, 12.0, 400)
actual = np.abs(np.exp(-params.mu * t) - (1.0 - params.mu * t))
bound = np.array([linearization_bound(params.mu, float(x)) for x in t])
ax_right.semilogy(t, np.maximum(actual, 1e-18), label="|e^(-mu t) - (1 - mu t)|")
ax_right.semilogy(t, np.maximum(bound, 1e-18), ls="--", label="(mu t)^2 / 2")
ax_right.set_xlabel("t")
ax_right.set_title("truncation error vs its bound")
ax_right.legend(fontsize=8)
ax_right.grid(True, lw=0.3)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.tight_layout()
fig.savefig(out / "03_horizon.png", dpi=120)
print(f"wrote {out / '03_horizon.png'}")
