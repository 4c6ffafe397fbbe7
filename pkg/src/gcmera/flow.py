"""Entangler profiles and the scale flow of the alpha spectra.

Under the entangling evolution with momentum profile ``g(k)`` each
polarization obeys

    alpha(k, s) = cutoff * exp(-2 \\int_0^s g(k e^v) dv)

starting from the product state ``alpha = cutoff`` at ``s = 0``. The
functions here evaluate that integral by adaptive quadrature, independently
of the closed forms in :mod:`gcmera.alpha_models`, and provide the
differential residuals implied by it.
"""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import check_int, check_momenta, check_polarization, check_positive, check_scale, unwrap
from .alpha_models import GeneralizedCMERAState, MagicCMERAState
from .exceptions import NumericalError, ValidationError
from .quadrature import gauss_kronrod
from .transforms import RadialFunction, radial_fourier

FD_STEP = 1e-5


@dataclass(frozen=True)
class EntanglerProfile:
    """Momentum profile of the entangler, split by polarization.

    Attributes
    ----------
    g_par, g_perp : callable
        Vectorized ``k -> g(k)``; they sum to one.
    family : str
        ``"magic"`` or ``"generalized"``.
    n : int
        Order of the family (1 for magic).
    cutoff : float
    """

    g_par: Callable
    g_perp: Callable
    family: str
    n: int
    cutoff: float

    def g(self, polarization, k):
        polarization = check_polarization(polarization)
        return self.g_par(k) if polarization == "longitudinal" else self.g_perp(k)


def magic_profile(cutoff=1.0):
    """``g_perp = cutoff^2 / (2 (cutoff^2 + k^2))`` and ``g_par = 1 - g_perp``."""
    cutoff = check_positive(cutoff, "cutoff")

    def g_perp(k):
        kappa = np.asarray(k, dtype=float) / cutoff
        return 0.5 / (1.0 + kappa * kappa)

    def g_par(k):
        kappa = np.asarray(k, dtype=float) / cutoff
        k2 = kappa * kappa
        return (0.5 + k2) / (1.0 + k2)

    return EntanglerProfile(g_par=g_par, g_perp=g_perp, family="magic", n=1, cutoff=cutoff)


def _generalized_g_perp(kappa, n):
    kappa = np.asarray(kappa, dtype=float)
    out = np.empty_like(kappa)
    lo = kappa <= 1.0
    kl = kappa[lo]
    u = kl ** (2 * n - 2)
    out[lo] = (1.0 + n * u) / (2.0 * (1.0 + u) * (1.0 + kl * kl + kl ** (2 * n)))
    # divide through by kappa^(4n-2) for large kappa
    t = kappa[~lo] ** -2.0
    tn1 = t ** (n - 1)
    out[~lo] = (tn1 + n) * t**n / (2.0 * (tn1 + 1.0) * (t**n + tn1 + 1.0))
    return out


def generalized_profile(cutoff=1.0, n=2):
    """Order-``n`` profile; ``g_perp`` decays as ``(n/2) (k/cutoff)^(-2n)``."""
    cutoff = check_positive(cutoff, "cutoff")
    n = check_int(n, "n", 2)

    def g_perp(k):
        return _generalized_g_perp(np.asarray(k, dtype=float) / cutoff, n)

    def g_par(k):
        return 1.0 - g_perp(k)

    return EntanglerProfile(g_par=g_par, g_perp=g_perp, family="generalized", n=n, cutoff=cutoff)


def profile_for(n=1, cutoff=1.0):
    return magic_profile(cutoff) if n == 1 else generalized_profile(cutoff, n)


def profile_position_space(profile, x, d, tol=1e-12):
    """Position-space transverse profile of the magic entangler.

    The radial transform of ``cutoff^2 / (2 (cutoff^2 + k^2))`` in ``d``
    dimensions, a Yukawa-type kernel proportional to
    ``K_((d-2)/2)(cutoff x) / (cutoff x)^((d-2)/2)``.
    """
    if profile.family != "magic":
        raise ValidationError("position-space profiles are available for the magic family only")
    lam = profile.cutoff
    F = RadialFunction(func=profile.g_perp, decay_exponent=2.0, scales=(lam,))
    x_arr, scalar = check_momenta(x)
    values = np.array([radial_fourier(F, d, float(xi), tol=tol, rel_tol=1e-12) for xi in x_arr.ravel()])
    return unwrap(values.reshape(x_arr.shape), scalar)


def flow_exponent(profile, polarization, k, s, tol=1e-13):
    """``\\int_0^s g(k e^v) dv`` by adaptive Gauss-Kronrod quadrature.

    Returns
    -------
    value, error : float
    """
    polarization = check_polarization(polarization)
    k = check_positive(k, "k")
    s = check_scale(s, allow_inf=False)
    if s == 0.0:
        return 0.0, 0.0
    g = profile.g_par if polarization == "longitudinal" else profile.g_perp

    def integrand(v):
        return g(k * np.exp(v))

    # the profile turns over where k e^v crosses the cutoff
    v_star = math.log(profile.cutoff / k)
    points = [v for v in (v_star - 2.0, v_star, v_star + 2.0) if 0.0 < v < s]
    try:
        return gauss_kronrod(integrand, 0.0, s, abs_tol=tol, rel_tol=0.0, limit=200, breakpoints=points)
    except NumericalError as exc:
        raise NumericalError(
            f"flow exponent did not reach tol={tol} at k={k}, s={s}",
            estimate=exc.estimate,
            error=exc.error,
        ) from exc


def flow_alpha_quadrature(profile, polarization, k, s, tol=1e-13):
    """``cutoff * exp(-2 E)`` with ``E`` from :func:`flow_exponent`.

    ``tol`` bounds the absolute error of the exponent, so the relative error
    of the returned alpha is about ``2 tol``.
    """
    exponent, _ = flow_exponent(profile, polarization, k, s, tol=tol)
    return profile.cutoff * math.exp(-2.0 * exponent)


def closed_form_state(profile, s, d=1):
    """Closed-form state matching ``profile`` at finite scale ``s``."""
    if profile.family == "magic":
        return MagicCMERAState(d=d, cutoff=profile.cutoff, s=s).fit()
    return GeneralizedCMERAState(d=d, cutoff=profile.cutoff, s=s, n=profile.n).fit()


def _log_derivative(fn, k, h=FD_STEP):
    # k d(ln f)/dk with a multiplicative central step
    up = math.log(fn(k * math.exp(h)))
    down = math.log(fn(k * math.exp(-h)))
    return (up - down) / (2.0 * h)


def fixed_point_residual(profile, alpha_fn, k, polarization="transverse"):
    """``k d(ln alpha)/dk - 2 g(k)``; zero for a fixed point of the flow.

    ``alpha_fn`` is any positive callable ``k -> alpha``.
    """
    k = check_positive(k, "k")
    slope = _log_derivative(lambda q: float(alpha_fn(q)), k)
    return slope - 2.0 * float(profile.g(polarization, k))


def flow_pde_residual(profile, polarization, k, s):
    """Residual of ``d_s alpha - k d_k alpha + 2 g(k) alpha`` on the closed form.

    Derivatives are central differences with relative step ``1e-5``.
    """
    polarization = check_polarization(polarization)
    k = check_positive(k, "k")
    s = check_scale(s, allow_inf=False)
    if s <= 0.0:
        raise ValidationError("flow_pde_residual needs s > 0")
    h_s = min(FD_STEP * max(s, 1.0), 0.5 * s)

    def alpha_at(kk, ss):
        return float(closed_form_state(profile, ss).alpha(polarization, kk))

    alpha = alpha_at(k, s)
    d_s = (alpha_at(k, s + h_s) - alpha_at(k, s - h_s)) / (2.0 * h_s)
    k_dk = alpha * _log_derivative(lambda q: alpha_at(q, s), k)
    return d_s - k_dk + 2.0 * float(profile.g(polarization, k)) * alpha
