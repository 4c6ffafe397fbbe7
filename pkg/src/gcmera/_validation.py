"""Input validation helpers."""
import math
import numbers

import numpy as np

from .exceptions import DomainError, ValidationError

POLARIZATIONS = ("longitudinal", "transverse")

_POLARIZATION_ALIASES = {
    "longitudinal": "longitudinal",
    "par": "longitudinal",
    "parallel": "longitudinal",
    "transverse": "transverse",
    "perp": "transverse",
    "transversal": "transverse",
}


def check_polarization(polarization):
    try:
        return _POLARIZATION_ALIASES[str(polarization).lower()]
    except KeyError:
        raise ValidationError(
            f"unknown polarization {polarization!r}; expected one of {POLARIZATIONS}"
        ) from None


def check_positive(value, name, allow_inf=False):
    """Return ``value`` as a float, raising if it is not strictly positive."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if math.isnan(value) or value <= 0 or (math.isinf(value) and not allow_inf):
        raise ValidationError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_scale(s, allow_inf=True):
    """Validate a scale parameter ``s >= 0``; ``math.inf`` marks the fixed point."""
    if isinstance(s, bool) or not isinstance(s, numbers.Real):
        raise ValidationError(f"s must be a real number, got {s!r}")
    s = float(s)
    if math.isnan(s) or s < 0:
        raise ValidationError(f"s must be >= 0, got {s!r}")
    if math.isinf(s) and not allow_inf:
        raise ValidationError("a finite scale s is required here")
    return s


def check_int(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_momenta(k):
    """Convert momenta to a float array and enforce ``k > 0``.

    Returns
    -------
    k : ndarray
        Float array with the same shape as the input (0-d for scalars).
    scalar : bool
        Whether the input was a scalar, so callers can unwrap results.
    """
    scalar = np.ndim(k) == 0
    try:
        arr = np.asarray(k, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"momenta must be numeric, got {k!r}") from None
    if np.any(np.isnan(arr)):
        raise ValidationError("momenta contain NaN")
    if np.any(arr <= 0):
        raise DomainError("momenta must be strictly positive (the zero mode k=0 is excluded)")
    return arr, scalar


def check_distance(x):
    scalar = np.ndim(x) == 0
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("distances must be finite and strictly positive")
    return arr, scalar


def unwrap(values, scalar):
    return float(values) if scalar else values
