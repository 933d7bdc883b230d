"""Domain types, right-hand sides, and composite constants."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given

from epikin import (
    BetaZero,
    LambdaZero,
    SirParameters,
    SisParameters,
    State,
    ValidationError,
    sir_composites,
    sir_rhs,
    sis_composites,
    sis_rhs,
)

from helpers import sir_params, sis_params, states

CANONICAL_SIS = SisParameters(r=0.5, alpha=0.2, k=1.0, i0=0.1)


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs,needle",
        [
            (dict(r=0.0, alpha=0.2, k=1.0, i0=0.1), "r"),
            (dict(r=-0.5, alpha=0.2, k=1.0, i0=0.1), "r"),
            (dict(r=0.5, alpha=-0.1, k=1.0, i0=0.1), "alpha"),
            (dict(r=0.5, alpha=0.2, k=0.0, i0=0.1), "k"),
            (dict(r=0.5, alpha=0.2, k=1.0, i0=0.0), "i0"),
            (dict(r=0.5, alpha=0.2, k=1.0, i0=1.0), "i0"),
            (dict(r=0.5, alpha=0.2, k=1.0, i0=2.0), "i0"),
            (dict(r=math.nan, alpha=0.2, k=1.0, i0=0.1), "r"),
        ],
    )
    def test_sis_rejects_bad_values_naming_the_field(self, kwargs, needle):
        with pytest.raises(ValidationError, match=needle):
            SisParameters(**kwargs)

    @pytest.mark.parametrize(
        "kwargs,needle",
        [
            (dict(beta=0.0, mu=0.1, s0=0.9, i0=0.1), "beta"),
            (dict(beta=0.8, mu=0.0, s0=0.9, i0=0.1), "mu"),
            (dict(beta=0.8, mu=0.1, s0=0.0, i0=0.1), "s0"),
            (dict(beta=0.8, mu=0.1, s0=0.9, i0=-0.1), "i0"),
            (dict(beta=math.inf, mu=0.1, s0=0.9, i0=0.1), "beta"),
        ],
    )
    def test_sir_rejects_bad_values_naming_the_field(self, kwargs, needle):
        with pytest.raises(ValidationError, match=needle):
            SirParameters(**kwargs)

    def test_sis_s0_is_derived_from_conservation(self):
        assert CANONICAL_SIS.s0 == 0.9

    def test_sir_accepts_mass_above_one_with_flag(self):
        p = SirParameters(beta=0.8, mu=0.1, s0=0.95, i0=0.15)
        assert p.mass_exceeds_one
        assert not SirParameters(beta=0.8, mu=0.1, s0=0.9, i0=0.1).mass_exceeds_one


class TestRhs:
    def test_sis_direct_substitution(self):
        d = sis_rhs(CANONICAL_SIS, State(s=0.9, i=0.1))
        assert d.s == pytest.approx(-0.025, abs=1e-15)
        assert d.i == pytest.approx(0.025, abs=1e-15)

    def test_sis_disease_free_is_fixed(self):
        d = sis_rhs(CANONICAL_SIS, State(s=0.4, i=0.0))
        assert d == State(0.0, 0.0)

    def test_sis_infective_stationary_where_s_equals_alpha_over_r(self):
        s = CANONICAL_SIS.alpha / CANONICAL_SIS.r
        d = sis_rhs(CANONICAL_SIS, State(s=s, i=0.3))
        assert d.s + d.i == 0.0
        assert abs(d.i) < 1e-16

    def test_sir_disease_free_equilibrium(self):
        p = SirParameters(beta=0.8, mu=0.1, s0=0.9, i0=0.1)
        assert sir_rhs(p, State(s=1.0, i=0.0)) == State(0.0, 0.0)

    def test_sir_endemic_equilibrium(self):
        p = SirParameters(beta=0.8, mu=0.1, s0=0.9, i0=0.1)
        d = sir_rhs(p, State(s=0.125, i=0.875))
        assert abs(d.s) <= 1e-14
        assert abs(d.i) <= 1e-14

    def test_sir_direct_substitution(self):
        p = SirParameters(beta=0.8, mu=0.1, s0=0.9, i0=0.1)
        d = sir_rhs(p, State(s=0.9, i=0.1))
        assert d.s == pytest.approx(-0.062, abs=1e-15)
        assert d.i == pytest.approx(0.062, abs=1e-15)

    @given(p=sis_params(), x=states())
    def test_sis_components_cancel_exactly(self, p, x):
        # Negation commutes with round-to-nearest, so the two components
        # are exact negations in floating point, not merely within 1 ulp.
        d = sis_rhs(p, x)
        assert d.s + d.i == 0.0


class TestSisComposites:
    def test_canonical_hand_arithmetic(self):
        c = sis_composites(CANONICAL_SIS)
        assert c.beta_sis == pytest.approx(0.3, abs=1e-16)
        assert c.c_sis == pytest.approx(25.0 / 3.0, rel=1e-15)
        assert c.r0 == pytest.approx(2.5, rel=1e-15)
        assert c.i_star == pytest.approx(0.6, rel=1e-15)

    def test_degenerate_growth_rate_raises(self):
        with pytest.raises(BetaZero):
            sis_composites(SisParameters(r=0.5, alpha=0.5, k=1.0, i0=0.1))

    def test_near_degenerate_relative_threshold(self):
        p = SisParameters(r=0.5, alpha=0.5 * (1.0 + 1e-13), k=1.0, i0=0.1)
        with pytest.raises(BetaZero):
            sis_composites(p)

    def test_starting_at_equilibrium_gives_zero_constant(self):
        p = SisParameters(r=0.5, alpha=0.2, k=1.0, i0=0.6)
        assert sis_composites(p).c_sis == 0.0

    def test_r0_absent_without_recovery(self):
        p = SisParameters(r=0.5, alpha=0.0, k=1.0, i0=0.1)
        assert sis_composites(p).r0 is None

    @given(p=sis_params(growing=True))
    def test_equilibrium_annihilates_the_rhs(self, p):
        c = sis_composites(p)
        d = sis_rhs(p, State(s=p.k - c.i_star, i=c.i_star))
        assert abs(d.i) <= 1e-14 * p.r * p.k**2


class TestSirComposites:
    def test_balanced_mass_hand_arithmetic(self):
        c = sir_composites(SirParameters(beta=0.8, mu=0.1, s0=0.9, i0=0.1))
        assert c.c == 0.0
        assert c.lam == pytest.approx(0.7, abs=1e-15)
        assert c.d_cancelled == pytest.approx(6.2, rel=1e-14)
        assert c.i_inf_closed == pytest.approx(0.875, rel=1e-15)
        assert not c.overflow_risk
        # with c = 0 the literal and cancelled constants differ by lam only
        assert c.d_raw == pytest.approx(c.d_cancelled / c.lam, rel=1e-14)

    def test_deficit_mass_hand_arithmetic(self):
        c = sir_composites(SirParameters(beta=0.8, mu=0.1, s0=0.7, i0=0.1))
        assert c.c == pytest.approx(-0.2, abs=1e-15)
        assert c.lam == pytest.approx(0.54, abs=1e-15)
        assert c.i_inf_closed == pytest.approx(0.675, rel=1e-14)
        assert c.i_inf_closed - c.i_star_true == pytest.approx(c.c, abs=1e-15)

    def test_tiny_mu_sets_overflow_risk_but_keeps_cancelled_constant(self):
        c = sir_composites(SirParameters(beta=1.0, mu=1e-8, s0=0.5, i0=0.1))
        assert c.overflow_risk
        assert c.d_raw is None
        assert math.isfinite(c.d_cancelled)

    def test_degenerate_logistic_rate_raises(self):
        # beta*(s0+i0) = 0.5*0.5 = mu exactly
        with pytest.raises(LambdaZero):
            sir_composites(SirParameters(beta=0.5, mu=0.25, s0=0.3, i0=0.2))

    def test_identity_battery_over_random_draws(self):
        rng = np.random.default_rng(1199)
        for _ in range(10_000):
            beta = rng.uniform(0.1, 1.5)
            mu = rng.uniform(0.02, 1.0)
            s0 = rng.uniform(0.05, 1.0)
            i0 = rng.uniform(0.02, 0.6)
            if abs(beta * (s0 + i0) - mu) <= 1e-6 * max(beta, mu):
                continue
            c = sir_composites(SirParameters(beta=beta, mu=mu, s0=s0, i0=i0))
            assert abs(c.lam - (beta - mu + beta * c.c)) <= 1e-15
            assert abs((c.i_inf_closed - c.i_star_true) - c.c) <= 1e-12

    @given(p=sir_params(positive_lam=None))
    def test_endemic_point_annihilates_the_rhs(self, p):
        c = sir_composites(p)
        d = sir_rhs(p, State(s=c.s_star_true, i=c.i_star_true))
        assert abs(d.s) <= 1e-14
        assert abs(d.i) <= 1e-14
