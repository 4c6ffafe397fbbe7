"""Bessel functions used by the radial Fourier transform."""
import functools
import math

import numpy as np
from scipy import optimize, special

from ._validation import unwrap
from .exceptions import DomainError


def bessel_j(nu, z):
    """Bessel function of the first kind ``J_nu(z)`` for ``nu >= 0, z >= 0``."""
    if nu < 0:
        raise DomainError(f"bessel_j needs nu >= 0, got {nu}")
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(~np.isfinite(z)):
        raise DomainError("bessel_j needs finite z >= 0")
    return unwrap(special.jv(nu, z), scalar)


def bessel_k(nu, z):
    """Modified Bessel function of the second kind ``K_nu(z)`` for ``z > 0``."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(~np.isfinite(z)):
        raise DomainError("bessel_k needs finite z > 0")
    return unwrap(special.kv(abs(nu), z), scalar)


def _mcmahon(nu, m):
    mu = 4.0 * nu * nu
    beta = (m + 0.5 * nu - 0.25) * math.pi
    e = 8.0 * beta
    return beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e**3)


def bessel_j_zeros(nu, count):
    """First ``count`` positive zeros of ``J_nu`` for ``nu >= -1/2``.

    Half-integer orders ``-1/2`` and ``1/2`` have closed forms; other orders
    start from McMahon's expansion and are polished with Brent's method.
    """
    return _zeros(float(nu), int(count)).copy()


@functools.lru_cache(maxsize=64)
def _zeros(nu, count):
    m = np.arange(1, count + 1, dtype=float)
    if nu == -0.5:
        return (m - 0.5) * math.pi
    if nu == 0.5:
        return m * math.pi
    if nu < -0.5:
        raise DomainError("bessel_j_zeros supports nu >= -1/2")
    zeros = np.empty(count)
    f = lambda t: special.jv(nu, t)
    for i, mm in enumerate(m):
        guess = _mcmahon(nu, mm)
        lo, hi = guess - 0.6, guess + 0.6
        if i > 0:
            lo = max(lo, zeros[i - 1] + 1e-3)
        lo = max(lo, 1e-8)
        while f(lo) * f(hi) > 0:
            lo = max(lo - 0.3, 1e-8)
            hi += 0.3
        zeros[i] = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return zeros
