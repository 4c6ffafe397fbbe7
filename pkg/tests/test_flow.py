import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from gcmera.alpha_models import ModelParams, fixed_point_state, massless_target, unentangled_state
from gcmera.exceptions import NumericalError, ValidationError
from gcmera.flow import (
    EntanglerProfile,
    closed_form_state,
    fixed_point_residual,
    flow_alpha_quadrature,
    flow_exponent,
    flow_pde_residual,
    generalized_profile,
    magic_profile,
    profile_position_space,
)


class TestProfiles:
    def test_magic_at_zero(self):
        p = magic_profile()
        assert p.g_par(0.0) == 0.5 and p.g_perp(0.0) == 0.5

    def test_magic_at_cutoff(self):
        p = magic_profile(2.0)
        assert p.g_perp(2.0) == pytest.approx(0.25, rel=1e-15)
        assert p.g_par(2.0) == pytest.approx(0.75, rel=1e-15)

    def test_magic_sum(self):
        p = magic_profile(1.0)
        assert p.g_par(17.3) + p.g_perp(17.3) == pytest.approx(1.0, abs=1e-15)

    def test_generalized_at_zero(self):
        assert generalized_profile(1.0, 3).g_perp(np.array([0.0]))[0] == 0.5

    @pytest.mark.parametrize("n", [2, 3])
    def test_generalized_decay(self, n):
        kap = 1e3
        val = float(generalized_profile(1.0, n).g_perp(np.array([kap]))[0]) * kap ** (2 * n)
        assert val == pytest.approx(n / 2, rel=1e-5)

    def test_generalized_sum(self):
        p = generalized_profile(1.0, 4)
        k = np.array([0.9])
        assert (p.g_par(k) + p.g_perp(k))[0] == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_generalized_branches_match_direct_formula(self, n):
        kap = np.array([0.3, 0.99, 1.01, 3.0, 20.0])
        direct = (1 + n * kap ** (2 * n - 2)) / (2 * (1 + kap ** (2 * n - 2)) * (1 + kap**2 + kap ** (2 * n)))
        np.testing.assert_allclose(generalized_profile(1.0, n).g_perp(kap), direct, rtol=1e-14)

    def test_generalized_rejects_n1(self):
        with pytest.raises(ValidationError):
            generalized_profile(1.0, 1)

    def test_polarization_accessor(self):
        p = magic_profile()
        assert p.g("perp", 1.0) == p.g_perp(1.0)
        assert p.g("longitudinal", 1.0) == p.g_par(1.0)


class TestPositionProfile:
    @pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
    def test_d1_exponential(self, x):
        lam = 1.5
        val = profile_position_space(magic_profile(lam), x, 1)
        assert val == pytest.approx(lam / 4 * math.exp(-lam * x), rel=1e-10)

    def test_d3_value(self):
        val = profile_position_space(magic_profile(1.0), 2.0, 3)
        assert val == pytest.approx(math.exp(-2) / (16 * math.pi), rel=1e-10)

    def test_d3_against_direct_quadrature(self):
        # independent oracle: 3d radial transform written as a sine integral, mpmath oscillatory quadrature
        x = 2.0
        ref = mp.quadosc(lambda k: k * mp.sin(k * x) / (2 * (1 + k * k)), [0, mp.inf], omega=x) / (2 * mp.pi**2 * x)
        assert profile_position_space(magic_profile(1.0), x, 3) == pytest.approx(float(ref), rel=1e-10)

    def test_d2_ratio_to_k0(self):
        x = np.linspace(0.5, 5.0, 10)
        ratio = profile_position_space(magic_profile(1.0), x, 2) / sps.k0(x)
        assert np.ptp(ratio) / np.mean(ratio) <= 1e-6

    def test_generalized_rejected(self):
        with pytest.raises(ValidationError):
            profile_position_space(generalized_profile(1.0, 2), 1.0, 1)


class TestQuadratureFlow:
    def test_s0_exact(self):
        assert flow_alpha_quadrature(magic_profile(2.0), "perp", 0.7, 0.0) == 2.0

    def test_magic_core_point(self):
        p = magic_profile(1.0)
        ref = closed_form_state(p, 2.7).alpha_perp(0.3)
        assert flow_alpha_quadrature(p, "perp", 0.3, 2.7) == pytest.approx(ref, rel=1e-10)

    def test_magic_against_literal_formula(self):
        m2 = math.exp(-2 * 2.7)
        ref = math.sqrt((0.09 + m2) / 1.09)
        assert flow_alpha_quadrature(magic_profile(), "perp", 0.3, 2.7) == pytest.approx(ref, rel=1e-10)

    def test_generalized_n2(self):
        p = generalized_profile(1.0, 2)
        ref = closed_form_state(p, 4.0).alpha_perp(5.0)
        assert flow_alpha_quadrature(p, "perp", 5.0, 4.0) == pytest.approx(ref, rel=1e-8)

    def test_exponent_error_is_small(self):
        val, err = flow_exponent(magic_profile(), "par", 0.01, 10.0)
        assert err <= 1e-13

    def test_failure_is_numerical_error(self):
        bad = EntanglerProfile(g_par=None, g_perp=lambda k: np.sin(1e6 / np.asarray(k)), family="x", n=1, cutoff=1.0)
        with pytest.raises(NumericalError):
            flow_exponent(bad, "perp", 1e-3, 10.0, tol=1e-15)

    @pytest.mark.parametrize("profile", [magic_profile(), generalized_profile(1.0, 2), generalized_profile(1.0, 3)])
    def test_sum_rule(self, profile):
        for k in (1e-3, 0.5, 17.3, 1e3):
            e_par, _ = flow_exponent(profile, "par", k, 6.0)
            e_perp, _ = flow_exponent(profile, "perp", k, 6.0)
            assert -2 * (e_par + e_perp) == pytest.approx(-12.0, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(logk=st.floats(-3, 3), s=st.floats(0.0, 10.0), n=st.integers(1, 3), pol=st.sampled_from(["par", "perp"]))
def test_quadrature_matches_closed_form_property(logk, s, n, pol):
    k = 10.0**logk
    p = magic_profile() if n == 1 else generalized_profile(1.0, n)
    ref = float(closed_form_state(p, s).alpha(pol, k))
    assert flow_alpha_quadrature(p, pol, k, s) == pytest.approx(ref, rel=1e-8)


class TestFixedPoint:
    @pytest.mark.parametrize("k", [0.1, 1.0, 10.0])
    def test_magic_fixed_point(self, k):
        st_ = fixed_point_state(ModelParams(s=math.inf))
        assert abs(fixed_point_residual(magic_profile(), st_.alpha_perp, k)) <= 1e-8

    def test_analytic_log_slope(self):
        # k dln(alpha)/dk of Lambda k / sqrt(k^2 + Lambda^2) is Lambda^2/(k^2+Lambda^2)
        st_ = fixed_point_state(ModelParams(s=math.inf, cutoff=2.0))
        p = magic_profile(2.0)
        k = 0.7
        slope = fixed_point_residual(p, st_.alpha_perp, k) + 2 * p.g_perp(k)
        assert slope == pytest.approx(4.0 / (k * k + 4.0), rel=1e-9)

    def test_unentangled_is_not_fixed(self):
        st_ = unentangled_state(ModelParams())
        assert fixed_point_residual(magic_profile(), st_.alpha_perp, 1.0) == pytest.approx(-0.5, abs=1e-12)

    def test_massless_target_is_not_fixed(self):
        # alpha = k has unit log-slope, so the residual is 1 - 2 g_perp = k^2/(k^2 + cutoff^2)
        st_ = massless_target(ModelParams())
        for k in (0.01, 1.0, 10.0, 100.0):
            r = fixed_point_residual(magic_profile(), st_.alpha_perp, k)
            assert r == pytest.approx(k * k / (k * k + 1), abs=1e-9)


class TestTransportEquation:
    @pytest.mark.parametrize("pol,k,s", [("perp", 1.0, 1.0), ("par", 0.2, 3.0), ("perp", 30.0, 5.0)])
    def test_magic(self, pol, k, s):
        p = magic_profile()
        alpha = float(closed_form_state(p, s).alpha(pol, k))
        assert abs(flow_pde_residual(p, pol, k, s)) / alpha <= 1e-6

    def test_generalized(self):
        p = generalized_profile(1.0, 3)
        alpha = float(closed_form_state(p, 2.0).alpha("par", 1.3))
        assert abs(flow_pde_residual(p, "par", 1.3, 2.0)) / alpha <= 1e-6

    def test_initial_condition(self):
        st_ = closed_form_state(magic_profile(), 0.0)
        assert np.all(st_.alpha_par(np.geomspace(1e-2, 1e2, 9)) == 1.0)

    def test_requires_positive_s(self):
        with pytest.raises(ValidationError):
            flow_pde_residual(magic_profile(), "perp", 1.0, 0.0)
