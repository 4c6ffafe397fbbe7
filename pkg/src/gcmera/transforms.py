"""Radial Fourier transforms with subtraction of polynomial asymptotes.

Convention (used for every absolute normalization in gcmera):

    f(x) = (2 pi)^(-d) \\int d^d k  exp(i k.x) F(|k|)
         = (2 pi)^(-d/2) x^(1 - d/2) \\int_0^inf dk k^(d/2) J_(d/2-1)(k x) F(k)

A large-momentum asymptote ``c0 + c2 k^2`` transforms into the distribution
``c0 delta(x) - c2 Laplacian delta(x)``; everything else is a regular
function of ``x > 0`` computed here.

The primary path integrates between consecutive zeros of the Bessel kernel
and sums the resulting alternating series with the Levin u-transform. An
independent path damps the integrand with ``exp(-eps k)`` and extrapolates
``eps -> 0``.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special

from ._validation import check_distance, check_int, check_positive
from .exceptions import NumericalError, ValidationError
from .quadrature import accelerate, gauss_kronrod
from .special import bessel_j_zeros, bessel_k


@dataclass(frozen=True)
class RadialFunction:
    """A rotationally symmetric momentum-space function.

    Attributes
    ----------
    func : callable
        ``k -> F(k)`` for ``k > 0`` (vectorized).
    asymptote : (c0, c2) or None
        Large-k polynomial ``c0 + c2 k^2``.
    decay_exponent : float or None
        ``p`` such that ``F - asymptote = O(k^-p)``.
    remainder : callable or None
        ``F(k) - c0 - c2 k^2`` evaluated without cancellation. When absent it
        is formed by direct subtraction.
    scales : tuple of float
        Momenta where ``F`` changes character; used to place quadrature
        breakpoints.
    vanishing : bool
        The remainder is identically zero (purely polynomial ``F``).
    """

    func: Callable
    asymptote: Optional[Tuple[float, float]] = None
    decay_exponent: Optional[float] = None
    remainder: Optional[Callable] = None
    scales: tuple = field(default_factory=tuple)
    vanishing: bool = False

    def __call__(self, k):
        return self.func(k)

    def regular(self, k):
        if self.vanishing:
            return np.zeros_like(np.asarray(k, dtype=float))
        if self.remainder is not None:
            return self.remainder(k)
        if self.asymptote is None:
            return self.func(k)
        c0, c2 = self.asymptote
        k = np.asarray(k, dtype=float)
        return self.func(k) - c0 - c2 * k * k


@dataclass(frozen=True)
class SubtractedCorrelator:
    """``delta_coeff delta(x) + lap_delta_coeff Laplacian delta(x) + regular(x)``."""

    delta_coeff: float
    lap_delta_coeff: float
    regular: Callable

    def __call__(self, x):
        return self.regular(x)


def as_radial(F):
    if isinstance(F, RadialFunction):
        return F
    if callable(F):
        return RadialFunction(func=F)
    raise ValidationError("expected a RadialFunction or a callable")


def radial_kernel(d, t):
    """``t^(d/2) J_(d/2-1)(t)``, with closed forms in d = 1 and d = 3."""
    t = np.asarray(t, dtype=float)
    if d == 1:
        return math.sqrt(2 / math.pi) * np.cos(t)
    if d == 3:
        return math.sqrt(2 / math.pi) * t * np.sin(t)
    return t ** (0.5 * d) * special.jv(0.5 * d - 1.0, t)


def _kernel_zeros(d, count):
    return bessel_j_zeros(0.5 * d - 1.0, count)


def _head_points(zeros, n0, scales_t):
    points = list(zeros[: max(n0 - 1, 0)])
    for st in scales_t:
        points.extend([0.25 * st, st, 4.0 * st])
    return sorted(p for p in points if p > 0)


def radial_fourier(F, d, x, tol=1e-10, rel_tol=0.0, method="levin", max_terms=400, full_output=False):
    """Regular part of the d-dimensional radial Fourier transform at ``x > 0``.

    Parameters
    ----------
    F : RadialFunction or callable
        Momentum-space function. If it carries an asymptote, only the
        remainder is transformed.
    d : int
        Spatial dimension.
    x : float
        Distance, strictly positive.
    tol, rel_tol : float
        Accept when the error estimate is below ``max(tol, rel_tol * |f|)``.
    method : {"levin", "epsilon"}
        Series accelerator for the oscillatory tail.
    max_terms : int
        Largest number of tail intervals before giving up.
    full_output : bool
        Also return a dict with the error estimate and partial sums.

    Raises
    ------
    NumericalError
        If the accelerated tail does not settle within ``max_terms``; the
        partial sums are attached to the exception.
    """
    F = as_radial(F)
    d = check_int(d, "d", 1)
    x = float(check_distance(x)[0])
    if F.vanishing:
        return (0.0, {"error": 0.0}) if full_output else 0.0

    pref = (2 * math.pi) ** (-0.5 * d) * x ** (-float(d))

    def integrand(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = radial_kernel(d, t[pos]) * F.regular(t[pos] / x)
        return out

    scales_t = [s * x for s in F.scales if s > 0]
    t_struct = max(scales_t, default=0.0)
    zeros = _kernel_zeros(d, 64)
    while zeros[-1] < 4.0 * t_struct + 2 * math.pi:
        zeros = _kernel_zeros(d, 2 * len(zeros))
    n0 = max(1, int(np.searchsorted(zeros, 4.0 * t_struct)) + 1)

    target = tol
    panel_tol = 1e-3 * tol
    head_points = _head_points(zeros, n0, scales_t)
    head_points = [p for p in head_points if p < zeros[n0 - 1]]
    head, head_err = gauss_kronrod(
        integrand, 0.0, zeros[n0 - 1], abs_tol=panel_tol, rel_tol=1e-13,
        limit=len(head_points) + 1000, breakpoints=head_points,
    )

    terms, errs = [], []
    n_tail = 24
    value = err = None
    partial = None
    while True:
        needed = n0 + n_tail + 1
        if len(zeros) < needed:
            zeros = _kernel_zeros(d, max(needed, 2 * len(zeros)))
        for j in range(n0 - 1 + len(terms), n0 - 1 + n_tail):
            v, e = gauss_kronrod(integrand, zeros[j], zeros[j + 1], abs_tol=panel_tol, rel_tol=1e-13)
            terms.append(v)
            errs.append(e)
        partial = np.cumsum(terms)
        quad_err = head_err + float(np.sum(errs))
        scale = max(abs(head + partial[-1]), 1e-300)
        if all(abs(t) <= 1e-3 * max(target, rel_tol * scale) for t in terms[-3:]):
            value, err = head + float(partial[-1]), quad_err + abs(terms[-1])
            break
        try:
            tail_value, acc_err = accelerate(partial, target, method=method)
        except NumericalError:
            tail_value, acc_err = float(partial[-1]), math.inf
        value, err = head + tail_value, quad_err + acc_err
        if err <= max(target, rel_tol * abs(value)):
            break
        if n_tail >= max_terms:
            raise NumericalError(
                f"oscillatory tail did not converge at x={x}",
                estimate=pref * value,
                error=pref * err,
                diagnostics={"partial_sums": (pref * (head + partial)).tolist()},
            )
        n_tail = min(2 * n_tail, max_terms)

    result = pref * value
    if full_output:
        return result, {"error": pref * err, "partial_sums": (pref * (head + partial)).tolist()}
    return result


def radial_fourier_damped(F, d, x, damping=(0.16, 0.08, 0.04, 0.02, 0.01), tol=1e-12):
    """Cross-check path: transform ``F exp(-eps k)`` and extrapolate ``eps -> 0``.

    ``damping`` lists ``eps * x`` values. The damped integrals are absolutely
    convergent and are summed interval by interval without acceleration; the
    limit uses polynomial extrapolation in ``eps``.

    Returns
    -------
    value, error : float
        Extrapolated transform and the change when the largest damping is
        dropped from the extrapolation.
    """
    F = as_radial(F)
    d = check_int(d, "d", 1)
    x = float(check_distance(x)[0])
    if F.vanishing:
        return 0.0, 0.0
    damping = sorted((check_positive(e, "damping") for e in damping), reverse=True)
    pref = (2 * math.pi) ** (-0.5 * d) * x ** (-float(d))
    scales_t = [s * x for s in F.scales if s > 0]
    values = [_damped_integral(F, d, x, e, scales_t, tol) for e in damping]
    eps = np.array(damping)
    vals = np.array(values)
    best = _neville_at_zero(eps, vals)
    coarse = _neville_at_zero(eps[1:], vals[1:]) if len(eps) > 2 else best
    return pref * best, pref * abs(best - coarse)


def _damped_integral(F, d, x, e, scales_t, tol):
    def integrand(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = radial_kernel(d, t[pos]) * F.regular(t[pos] / x) * np.exp(-e * t[pos])
        return out

    t_struct = max(scales_t, default=0.0)
    t_max = 60.0 / e + 4.0 * t_struct
    zeros = _kernel_zeros(d, int(t_max / math.pi) + 8)
    zeros = zeros[zeros <= t_max]
    points = set(zeros.tolist())
    points.update(p for st in scales_t for p in (0.25 * st, st, 4 * st))
    edges = [0.0] + sorted(p for p in points if 0 < p < t_max) + [t_max]
    parts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, _ = gauss_kronrod(integrand, lo, hi, abs_tol=tol * 1e-3, rel_tol=1e-13)
        parts.append(v)
    return math.fsum(parts)


def _neville_at_zero(h, y):
    """Value at ``h = 0`` of the interpolating polynomial through ``(h, y)``."""
    h = list(map(float, h))
    p = list(map(float, y))
    n = len(h)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i])
    return p[0]


def subtract_asymptotics(F, k_fit_window=(10.0, 160.0), n_points=6, rtol=1e-6):
    """Estimate the large-k polynomial ``c0 + c2 k^2`` of ``F``.

    ``c2`` is extrapolated from ``F(k) / k^2`` and then ``c0`` from
    ``F(k) - c2 k^2``, both with Neville extrapolation in ``h = 1/k^2`` on
    geometrically spaced momenta spanning the window.

    Returns
    -------
    c0, c2 : float
    remainder : RadialFunction
        ``F - c0 - c2 k^2``, using ``F.remainder`` when available.

    Raises
    ------
    NumericalError
        When dropping the innermost fit point changes a coefficient by more
        than ``rtol`` relative to the size of ``F`` in the window.
    """
    F = as_radial(F)
    k_lo, k_hi = (check_positive(v, "k_fit_window") for v in k_fit_window)
    if not k_hi > k_lo:
        raise ValidationError("k_fit_window must be increasing")
    n_points = check_int(n_points, "n_points", 3)
    k = np.geomspace(k_lo, k_hi, n_points)
    h = 1.0 / (k * k)
    values = np.asarray(F.func(k), dtype=float)

    c2 = _neville_at_zero(h, values * h)
    c2_check = _neville_at_zero(h[1:], values[1:] * h[1:])
    shifted = values - c2 * k * k
    c0 = _neville_at_zero(h, shifted)
    c0_check = _neville_at_zero(h[1:], shifted[1:])

    size = float(np.max(np.abs(values * h)))
    if abs(c2 - c2_check) > rtol * max(size, 1e-300) or abs(c0 - c0_check) > rtol * max(
        float(np.max(np.abs(values))), 1e-300
    ):
        raise NumericalError(
            "asymptotic extrapolation did not converge on the fit window",
            estimate=(c0, c2),
            error=(abs(c0 - c0_check), abs(c2 - c2_check)),
            diagnostics={"k": k.tolist(), "F": values.tolist()},
        )

    if F.remainder is not None or F.vanishing:
        rem = RadialFunction(
            func=F.regular, asymptote=None, decay_exponent=F.decay_exponent,
            scales=F.scales, vanishing=F.vanishing,
        )
    else:
        rem = RadialFunction(
            func=lambda q: F.func(q) - c0 - c2 * np.asarray(q, dtype=float) ** 2,
            decay_exponent=F.decay_exponent,
            scales=F.scales,
        )
    return float(c0), float(c2), rem


def delta_coefficients(c0, c2, d):
    """Map ``c0 + c2 k^2`` to ``(delta, Laplacian-delta)`` coefficients.

    Under the transform convention ``k^2 -> -Laplacian``, so the Laplacian
    coefficient carries the opposite sign of ``c2``.
    """
    check_int(d, "d", 1)
    return float(c0), float(-c2) if c2 != 0 else 0.0


def power_law_transform(p, d, x):
    """Transform of ``|k|^p`` at ``x > 0`` by analytic continuation in ``p``.

    ``2^p pi^(-d/2) Gamma((d+p)/2) / Gamma(-p/2) x^(-d-p)``. Vanishes for
    even non-negative ``p`` (purely distributional).
    """
    x, scalar = check_distance(x)
    if (d + p) <= 0 and float(d + p) / 2 == int((d + p) / 2):
        raise ValidationError("power law is not locally integrable at k = 0")
    coeff = 2.0**p * math.pi ** (-0.5 * d) * special.gamma(0.5 * (d + p)) * special.rgamma(-0.5 * p)
    out = coeff * x ** (-(d + p))
    return float(out) if scalar else out


def shifted_power_transform(a, m, d, x):
    """Transform of ``(k^2 + m^2)^(-a)`` at ``x > 0`` (analytic in ``a``).

    ``(2 pi)^(-d/2) 2^(1-a) / Gamma(a) (m/x)^(d/2-a) K_(d/2-a)(m x)``.
    """
    m = check_positive(m, "m")
    x, scalar = check_distance(x)
    order = 0.5 * d - a
    out = (
        (2 * math.pi) ** (-0.5 * d)
        * 2.0 ** (1.0 - a)
        * special.rgamma(a)
        * (m / x) ** order
        * bessel_k(order, m * x)
    )
    return float(out) if scalar else out
