"""Model parameters, right-hand sides, and derived constants.

Two compartmental models are covered:

* SIS: recovered infectives return to the susceptible class. The pair
  ``(s, i)`` conserves the total population ``k``, so the system reduces to
  a logistic equation for ``i`` with growth rate ``beta = r*k - alpha``.
* SIR with demography: normalized fractions with inflow/outflow rate ``mu``.
  The sum ``s + i`` relaxes toward 1 like ``1 + C*exp(-mu*t)`` where
  ``C = s0 + i0 - 1``.

Everything here is a pure function over immutable values; the module is
safe for unsynchronized concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BetaZero, LambdaZero, ValidationError

__all__ = [
    "DEGENERACY_RTOL",
    "SAFE_EXP_BOUND",
    "State",
    "SisParameters",
    "SisComposites",
    "SirParameters",
    "SirComposites",
    "sis_rhs",
    "sir_rhs",
    "sis_composites",
    "sir_composites",
]

# Relative threshold below which beta = r*k - alpha (SIS) or lambda (SIR)
# counts as zero. Relative so behavior is invariant under time rescaling.
DEGENERACY_RTOL = 1e-12

# |x| above this makes exp(x) overflow or exp(-x) underflow in float64
# (the true limit is ~709.78; a round margin is kept on purpose).
SAFE_EXP_BOUND = 700.0


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class State:
    """Susceptible/infective pair at one instant, in model units.

    Also used for derivatives and residuals, which share the shape. No sign
    constraint is imposed: the analysis layer must observe unphysical
    values, not mask them.
    """

    s: float
    i: float


@dataclass(frozen=True)
class SisParameters:
    """Raw constants of the SIS model.

    Attributes:
        r: infectivity coefficient (1 / (time * population)).
        alpha: recovery coefficient (1 / time).
        k: total population.
        i0: initial infectives, strictly between 0 and k.
    """

    r: float
    alpha: float
    k: float
    i0: float

    def __post_init__(self) -> None:
        for name in ("r", "alpha", "k", "i0"):
            _require_finite(name, getattr(self, name))
        _require(self.r > 0, f"r must be positive, got {self.r}")
        _require(self.alpha >= 0, f"alpha must be non-negative, got {self.alpha}")
        _require(self.k > 0, f"k must be positive, got {self.k}")
        _require(
            0 < self.i0 < self.k,
            f"i0 must satisfy 0 < i0 < k, got i0={self.i0} with k={self.k}",
        )

    @property
    def s0(self) -> float:
        """Initial susceptibles, derived from conservation: k - i0."""
        return self.k - self.i0


@dataclass(frozen=True)
class SisComposites:
    """Derived SIS constants.

    Attributes:
        beta_sis: logistic growth rate r*k - alpha (1 / time).
        c_sis: integration constant (beta - i0*r) / (beta * i0).
        r0: basic reproduction number r*k / alpha, or None when alpha = 0.
        i_star: endemic equilibrium beta / r = k - alpha / r.
    """

    beta_sis: float
    c_sis: float
    r0: float | None
    i_star: float


@dataclass(frozen=True)
class SirParameters:
    """Raw constants of the SIR model with demography, in fractions.

    Attributes:
        beta: infectivity coefficient (1 / time).
        mu: combined demography/recovery coefficient (1 / time). It appears
            both as the +mu inflow into s and as the -mu*i outflow; it is a
            single coefficient here, never split.
        s0: initial susceptible fraction.
        i0: initial infective fraction.

    Inputs with s0 + i0 > 1 are accepted, not rejected: the algebra
    (C = s0 + i0 - 1 > 0) stays well defined and is worth analyzing. The
    ``mass_exceeds_one`` property flags them.
    """

    beta: float
    mu: float
    s0: float
    i0: float

    def __post_init__(self) -> None:
        for name in ("beta", "mu", "s0", "i0"):
            _require_finite(name, getattr(self, name))
        _require(self.beta > 0, f"beta must be positive, got {self.beta}")
        _require(self.mu > 0, f"mu must be positive, got {self.mu}")
        _require(self.s0 > 0, f"s0 must be positive, got {self.s0}")
        _require(self.i0 > 0, f"i0 must be positive, got {self.i0}")

    @property
    def mass_exceeds_one(self) -> bool:
        """True when s0 + i0 > 1 (admissible but epidemiologically odd)."""
        return self.s0 + self.i0 > 1.0


@dataclass(frozen=True)
class SirComposites:
    """Derived SIR constants.

    Attributes:
        c: sum-law integration constant s0 + i0 - 1.
        lam: logistic rate beta - mu + beta*c = beta*(s0 + i0) - mu.
        d_raw: literal integration constant
            (lam - i0*beta) / (lam * i0 * exp(beta*c/mu)), or None when the
            exponential is not representable.
        d_cancelled: (lam - i0*beta) / i0, the product lam*d_raw*exp(beta*c/mu)
            with the mutually cancelling exponentials removed. Always finite.
        i_inf_closed: asymptote of the closed form, lam / beta.
        i_star_true: endemic infective equilibrium (beta - mu) / beta.
        s_star_true: endemic susceptible equilibrium mu / beta.
        overflow_risk: True when |beta*c/mu| exceeds the safe exponent bound.
    """

    c: float
    lam: float
    d_raw: float | None
    d_cancelled: float
    i_inf_closed: float
    i_star_true: float
    s_star_true: float
    overflow_risk: bool


def sis_rhs(p: SisParameters, x: State) -> State:
    """SIS derivatives (s', i') at state ``x``.

    s' = -r*s*i + alpha*i and i' = r*s*i - alpha*i. The two components are
    exact negations of each other in floating point, not just in exact
    arithmetic, because negation and round-to-nearest commute.
    """
    return State(
        s=-p.r * x.s * x.i + p.alpha * x.i,
        i=p.r * x.s * x.i - p.alpha * x.i,
    )


def sir_rhs(p: SirParameters, x: State) -> State:
    """SIR-with-demography derivatives (s', i') at state ``x``.

    s' = -beta*s*i - mu*s + mu and i' = beta*s*i - mu*i.
    """
    return State(
        s=-p.beta * x.s * x.i - p.mu * x.s + p.mu,
        i=p.beta * x.s * x.i - p.mu * x.i,
    )


def sis_composites(p: SisParameters) -> SisComposites:
    """Derive the SIS constants beta, C, R0, and the endemic equilibrium.

    Args:
        p: validated SIS parameters.

    Returns:
        SisComposites with beta_sis = r*k - alpha exactly as computed,
        c_sis = (beta - i0*r) / (beta * i0), r0 = r*k / alpha (None when
        alpha = 0), and i_star = beta / r.

    Raises:
        BetaZero: when |r*k - alpha| <= DEGENERACY_RTOL * max(r*k, alpha);
            callers must switch to the beta -> 0 limit i0 / (1 + r*i0*t).
    """
    rk = p.r * p.k
    beta = rk - p.alpha
    if abs(beta) <= DEGENERACY_RTOL * max(rk, p.alpha):
        raise BetaZero(
            f"r*k - alpha = {beta!r} is degenerate for r={p.r}, alpha={p.alpha}, "
            f"k={p.k}; the closed form divides by it"
        )
    c = (beta - p.i0 * p.r) / (beta * p.i0)
    r0 = None if p.alpha == 0 else rk / p.alpha
    return SisComposites(beta_sis=beta, c_sis=c, r0=r0, i_star=beta / p.r)


def sir_composites(p: SirParameters) -> SirComposites:
    """Derive the SIR constants C, lambda, D, and both asymptotes.

    Args:
        p: validated SIR parameters.

    Returns:
        SirComposites. ``d_raw`` is the literal constant with the
        exp(beta*C/mu) factor; when |beta*C/mu| > SAFE_EXP_BOUND it is None
        and ``overflow_risk`` is True. ``d_cancelled`` is always finite and
        is what the closed-form evaluator uses.

    Raises:
        LambdaZero: when |lambda| <= DEGENERACY_RTOL * max(beta, mu).
    """
    c = p.s0 + p.i0 - 1.0
    lam = p.beta * (p.s0 + p.i0) - p.mu
    if abs(lam) <= DEGENERACY_RTOL * max(p.beta, p.mu):
        raise LambdaZero(
            f"lambda = beta*(s0 + i0) - mu = {lam!r} is degenerate for beta={p.beta}, "
            f"mu={p.mu}, s0={p.s0}, i0={p.i0}; the closed form is undefined there"
        )
    d_cancelled = (lam - p.i0 * p.beta) / p.i0
    exponent = p.beta * c / p.mu
    overflow_risk = abs(exponent) > SAFE_EXP_BOUND
    d_raw = None if overflow_risk else (lam - p.i0 * p.beta) / (lam * p.i0 * math.exp(exponent))
    return SirComposites(
        c=c,
        lam=lam,
        d_raw=d_raw,
        d_cancelled=d_cancelled,
        i_inf_closed=lam / p.beta,
        i_star_true=(p.beta - p.mu) / p.beta,
        s_star_true=p.mu / p.beta,
        overflow_risk=overflow_risk,
    )
