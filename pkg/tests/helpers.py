"""Shared parameter generators for the test suite.

Two flavors: hypothesis strategies for property tests over scalar math, and
seeded numpy draws for tests that integrate (hypothesis shrinking and fixed
integration budgets do not mix well). Both construct parameters so that the
degeneracy thresholds are avoided by a wide margin unless a test opts in.
"""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from epikin import SirParameters, SisParameters


def _build_sis(r: float, k: float, alpha_frac: float, i0_frac: float) -> SisParameters:
    # alpha = alpha_frac * r * k keeps beta = r*k*(1 - alpha_frac) a fixed
    # relative distance from zero, so no draw is degenerate by accident.
    return SisParameters(r=r, alpha=alpha_frac * r * k, k=k, i0=i0_frac * k)


def sis_params(growing: bool | None = None) -> st.SearchStrategy[SisParameters]:
    """SIS parameters with beta bounded away from zero.

    growing=True forces beta > 0, False forces beta < 0, None allows both.
    """
    if growing is True:
        alpha_frac = st.floats(0.0, 0.9)
    elif growing is False:
        alpha_frac = st.floats(1.1, 1.8)
    else:
        alpha_frac = st.one_of(st.floats(0.0, 0.9), st.floats(1.1, 1.8))
    return st.builds(
        _build_sis,
        r=st.floats(0.05, 2.0),
        k=st.floats(0.2, 5.0),
        alpha_frac=alpha_frac,
        i0_frac=st.floats(0.02, 0.98),
    )


def _build_sir(beta: float, s0: float, i0: float, mu_frac: float) -> SirParameters:
    # mu = mu_frac * beta * (s0 + i0) keeps lambda = beta*(s0+i0) - mu a
    # fixed relative distance from zero on either side.
    return SirParameters(beta=beta, mu=mu_frac * beta * (s0 + i0), s0=s0, i0=i0)


def sir_params(positive_lam: bool | None = True) -> st.SearchStrategy[SirParameters]:
    """SIR parameters with lambda bounded away from zero."""
    if positive_lam is True:
        mu_frac = st.floats(0.05, 0.9)
    elif positive_lam is False:
        mu_frac = st.floats(1.1, 2.0)
    else:
        mu_frac = st.one_of(st.floats(0.05, 0.9), st.floats(1.1, 2.0))
    return st.builds(
        _build_sir,
        beta=st.floats(0.1, 1.5),
        s0=st.floats(0.05, 1.0),
        i0=st.floats(0.02, 0.6),
        mu_frac=mu_frac,
    )


def states(limit: float = 5.0) -> st.SearchStrategy:
    from epikin import State

    coord = st.floats(0.0, limit)
    return st.builds(State, s=coord, i=coord)


def draw_sis(rng: np.random.Generator) -> SisParameters:
    """Seeded SIS draw, beta > 0, mild enough for dt=1e-3 integration."""
    r = rng.uniform(0.05, 1.5)
    k = rng.uniform(0.3, 3.0)
    alpha = rng.uniform(0.0, 0.85) * r * k
    i0 = rng.uniform(0.05, 0.95) * k
    return SisParameters(r=r, alpha=alpha, k=k, i0=i0)


def draw_sir_c_zero(rng: np.random.Generator) -> SirParameters:
    """Seeded SIR draw on the exact sub-manifold s0 + i0 = 1."""
    while True:
        beta = rng.uniform(0.2, 1.2)
        mu = rng.uniform(0.02, 0.5)
        i0 = rng.uniform(0.02, 0.9)
        if abs(beta - mu) > 0.05 * max(beta, mu):
            return SirParameters(beta=beta, mu=mu, s0=1.0 - i0, i0=i0)


def draw_sir(rng: np.random.Generator) -> SirParameters:
    """Seeded SIR draw, unconstrained sum, lambda away from zero."""
    while True:
        beta = rng.uniform(0.2, 1.2)
        mu = rng.uniform(0.05, 0.6)
        s0 = rng.uniform(0.1, 0.9)
        i0 = rng.uniform(0.05, 0.6)
        lam = beta * (s0 + i0) - mu
        if abs(lam) > 0.05 * max(beta, mu):
            return SirParameters(beta=beta, mu=mu, s0=s0, i0=i0)


def draw_scenario(rng: np.random.Generator):
    """Seeded valid ScenarioConfig with occasional sweep section."""
    from epikin import IntegratorConfig, ModelKind, TimeGrid
    from epikin.cli import ScenarioConfig, SweepSpec

    if rng.integers(2) == 0:
        model, params, fields = ModelKind.SIS, draw_sis(rng), ("r", "alpha", "k", "i0")
    else:
        model, params, fields = ModelKind.SIR, draw_sir(rng), ("beta", "mu", "s0", "i0")
    t_start = rng.uniform(0.0, 2.0)
    grid = TimeGrid(
        t_start=t_start,
        t_end=t_start + rng.uniform(1.0, 40.0),
        n_points=int(rng.integers(2, 400)),
    )
    integrator = IntegratorConfig(
        dt=10.0 ** rng.uniform(-4.0, -1.0),
        halving_check=bool(rng.integers(2)),
        tolerance=10.0 ** rng.uniform(-11.0, -6.0),
    )
    sweep = None
    if rng.integers(3) == 0:
        field = fields[rng.integers(len(fields))]
        lo = float(getattr(params, field)) or 0.1
        sweep = SweepSpec(
            field=field,
            lo=lo,
            hi=lo * rng.uniform(1.0, 2.0),
            steps=int(rng.integers(2, 8)),
            scale="log" if lo > 0 and rng.integers(2) == 0 else "linear",
        )
    return ScenarioConfig(
        model=model,
        parameters=params,
        grid=grid,
        integrator=integrator,
        eps=10.0 ** rng.uniform(-6.0, -1.0),
        sweep=sweep,
    )


def draw_sir_biased(rng: np.random.Generator) -> SirParameters:
    """Seeded SIR draw with C != 0, beta > mu, lambda > 0, fast settling.

    The rejection bounds keep both the closed form's own transient and the
    reference system's slowest mode far decayed by t = 200.
    """
    while True:
        beta = rng.uniform(0.4, 1.2)
        mu = rng.uniform(0.08, 0.25)
        s0 = rng.uniform(0.3, 0.9)
        i0 = rng.uniform(0.05, 0.5)
        c = s0 + i0 - 1.0
        lam = beta * (s0 + i0) - mu
        if abs(c) >= 0.02 and beta - mu >= 0.15 and lam >= 0.1:
            return SirParameters(beta=beta, mu=mu, s0=s0, i0=i0)
