"""Quadrature, series acceleration and special functions against independent oracles."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from gcmera.exceptions import DomainError, NumericalError
from gcmera.quadrature import accelerate, gauss_kronrod, integrate_to_infinity, levin_u, wynn_epsilon
from gcmera.special import bessel_j, bessel_j_zeros, bessel_k

mp.mp.dps = 20


class TestGaussKronrod:
    def test_polynomial_exact(self):
        val, err = gauss_kronrod(lambda x: x**10 - 3 * x**3, 0.0, 2.0)
        assert val == pytest.approx(2**11 / 11 - 3 * 2**4 / 4, rel=1e-15)
        assert err < 1e-12

    def test_sqrt_endpoint_singularity(self):
        val, _ = gauss_kronrod(np.sqrt, 0.0, 1.0, abs_tol=1e-13, rel_tol=1e-13)
        assert val == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_reversed_limits(self):
        val, _ = gauss_kronrod(np.exp, 1.0, 0.0)
        assert val == pytest.approx(-(math.e - 1.0), rel=1e-14)

    def test_breakpoints(self):
        f = lambda x: np.abs(x - 0.3)
        val, _ = gauss_kronrod(f, 0.0, 1.0, breakpoints=[0.3])
        assert val == pytest.approx(0.3**2 / 2 + 0.7**2 / 2, rel=1e-15)

    def test_budget_exhaustion_raises(self):
        with pytest.raises(NumericalError) as info:
            gauss_kronrod(lambda x: np.sin(1.0 / x), 1e-8, 1.0, abs_tol=1e-15, rel_tol=0.0, limit=5)
        assert info.value.estimate is not None

    def test_nonfinite_integrand(self):
        with np.errstate(divide="ignore"), pytest.raises(NumericalError):
            gauss_kronrod(lambda x: 1.0 / (x - x), 0.0, 1.0)

    def test_to_infinity(self):
        val, _ = integrate_to_infinity(lambda x: 1.0 / (1.0 + x * x), 0.0)
        assert val == pytest.approx(math.pi / 2, rel=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(a=st.floats(0.1, 5.0), b=st.floats(0.1, 5.0))
    def test_gaussian_moments_property(self, a, b):
        val, _ = integrate_to_infinity(lambda x: x * x * np.exp(-a * x * x), 0.0, breakpoints=[b])
        assert val == pytest.approx(math.sqrt(math.pi) / (4 * a**1.5), rel=1e-11)


class TestAcceleration:
    def alternating_log2(self, n):
        return np.cumsum([(-1) ** j / (j + 1) for j in range(n)])

    def test_levin_log2(self):
        val, err = accelerate(self.alternating_log2(20), 1e-15)
        assert val == pytest.approx(math.log(2), abs=1e-14)
        assert err < 1e-12

    def test_epsilon_log2(self):
        val, _ = accelerate(self.alternating_log2(20), 1e-15, method="epsilon")
        assert val == pytest.approx(math.log(2), abs=1e-10)

    def test_leibniz_pi(self):
        S = np.cumsum([(-1) ** j / (2 * j + 1) for j in range(25)])
        assert levin_u(S)[-1] == pytest.approx(math.pi / 4, abs=1e-13)
        assert wynn_epsilon(S)[-1] == pytest.approx(math.pi / 4, abs=1e-12)

    def test_no_usable_estimate(self):
        with pytest.raises(NumericalError):
            accelerate([1.0, 1.0], 1e-12)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            accelerate([1.0, 2.0, 3.0], 1e-12, method="magic")


class TestBessel:
    def test_k_half_closed_form(self):
        assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-14)
        assert bessel_k(0.5, 1.0) == pytest.approx(0.4610685044478946, rel=1e-13)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("z", [1e-3, 0.5, 3.0, 12.0, 60.0])
    def test_k_integral_representation(self, nu, z):
        # K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, evaluated in extended precision
        top = mp.acosh(1 + 80 / z) + 1  # integrand below exp(-80) relative beyond this
        ref = mp.quad(lambda t: mp.e ** (-z * mp.cosh(t)) * mp.cosh(nu * t), mp.linspace(0, top, 8))
        assert bessel_k(nu, z) == pytest.approx(float(ref), rel=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 3])
    @pytest.mark.parametrize("z", [1e-6, 0.3, 4.0, 25.0, 700.0])
    def test_j_integral_representation(self, n, z):
        # Bessel's integral for integer order
        ref = mp.quad(lambda t: mp.cos(n * t - z * mp.sin(t)), mp.linspace(0, mp.pi, int(z / 3) + 10)) / mp.pi
        assert bessel_j(n, z) == pytest.approx(float(ref), rel=1e-10, abs=1e-15)

    def test_j_half_closed_form(self):
        z = np.array([0.1, 2.0, 30.0])
        np.testing.assert_allclose(bessel_j(0.5, z), np.sqrt(2 / (np.pi * z)) * np.sin(z), rtol=1e-13)

    def test_j0_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0

    def test_k0_small_argument_series(self):
        z = 1e-4
        series = -math.log(z / 2) - np.euler_gamma
        assert bessel_k(0, z) == pytest.approx(series, rel=1e-6)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_j(-1.0, 1.0)
        with pytest.raises(DomainError):
            bessel_j(0.0, -1.0)
        with pytest.raises(DomainError):
            bessel_k(0.0, 0.0)

    @pytest.mark.parametrize("nu", [0.0, 1.0, 2.0])
    def test_zeros_match_reference(self, nu):
        np.testing.assert_allclose(bessel_j_zeros(nu, 40), sps.jn_zeros(int(nu), 40), rtol=1e-13)

    @pytest.mark.parametrize("nu", [-0.5, 0.5, 1.5])
    def test_zeros_are_roots(self, nu):
        z = bessel_j_zeros(nu, 30)
        assert np.all(np.diff(z) > 0)
        np.testing.assert_allclose(sps.jv(nu, z), 0.0, atol=1e-13)
