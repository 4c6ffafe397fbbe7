"""Gauge-invariance and UV-regularity checks for the flow states."""
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_int, check_momenta, check_polarization, check_positive, check_scale, unwrap
from .alpha_models import ModelParams, cmera_state
from .exceptions import NumericalError, ValidationError
from .quadrature import gauss_kronrod, integrate_to_infinity
from .transforms import _neville_at_zero


def gauge_violation(state, k):
    """``<Pi_par Pi_par>`` density ``alpha_par(k) / 2``; zero iff Gauss's law holds."""
    k, scalar = check_momenta(k)
    if state.longitudinal_constrained:
        return unwrap(np.zeros_like(k), scalar)
    return unwrap(0.5 * np.asarray(state.alpha("longitudinal", k)), scalar)


def violation_plateau(state, k_probe=None):
    """Large-k limit of :func:`gauge_violation`, by extrapolation in ``1/k^2``."""
    lam = state.params_.cutoff
    k_probe = k_probe or 1e3 * lam
    k = k_probe * np.array([1.0, 2.0, 4.0, 8.0])
    values = gauge_violation(state, k)
    return _neville_at_zero(1.0 / k**2, values)


@dataclass(frozen=True)
class GaugeDecayReport:
    slope: float
    intercept: float
    s: np.ndarray
    plateau: np.ndarray
    max_residual: float

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "max_residual": self.max_residual}


def gauge_violation_decay(params, s_grid, k_probe=None):
    """Fit ``log(plateau)`` against ``s``; the exact law has slope ``-2``."""
    s = np.asarray([check_scale(v, allow_inf=False) for v in s_grid], dtype=float)
    if len(s) < 2:
        raise ValidationError("need at least two scales to fit a decay rate")
    plateau = np.array([
        violation_plateau(cmera_state(ModelParams(d=params.d, cutoff=params.cutoff, s=v, n=params.n)), k_probe)
        for v in s
    ])
    if np.any(plateau <= 0):
        raise NumericalError("non-positive plateau; cannot fit a log-slope", diagnostics={"plateau": plateau.tolist()})
    slope, intercept = np.polyfit(s, np.log(plateau), 1)
    resid = np.log(plateau) - (slope * s + intercept)
    return GaugeDecayReport(float(slope), float(intercept), s, plateau, float(np.max(np.abs(resid))))


# -- coincidence limits -------------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of a coincidence-limit test.

    ``estimate`` is the extrapolated limit when finite and NaN otherwise.
    ``exponent`` is the fitted power of the increments of the partial
    integrals between successive radii (0 for logarithmic growth).
    """

    d: int
    n: int
    polarization: str
    verdict: str
    growth: str
    estimate: float
    exponent: float
    trace: list = field(default_factory=list)

    @property
    def expected(self):
        return "finite" if self.d < 2 * self.n else "divergent"

    def as_dict(self):
        return {
            "d": self.d,
            "n": self.n,
            "polarization": self.polarization,
            "verdict": self.verdict,
            "growth": self.growth,
            "estimate": self.estimate,
            "increment_exponent": self.exponent,
            "expected": self.expected,
        }


def _sphere_area(d):
    return 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)


def coincidence_trace(state, polarization, d, radii):
    """Partial integrals ``S_(d-1) \\int_0^K k^(d-1) (1/alpha - 1/alpha_inf) dk``."""
    polarization = check_polarization(polarization)
    area = _sphere_area(d)

    def integrand(k):
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        pos = k > 0
        out[pos] = k[pos] ** (d - 1) * state.inverse_alpha_excess(polarization, k[pos])
        return out

    lam = state.params_.cutoff
    scales = [v for v in (state.mass_, lam) if v > 0]
    edges = [0.0] + list(radii)
    total, trace = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        pts = [p for v in scales for p in (0.1 * v, v, 10 * v) if lo < p < hi]
        piece, _ = gauss_kronrod(integrand, lo, hi, abs_tol=1e-300, rel_tol=1e-13, limit=400, breakpoints=pts)
        total.append(piece)
        trace.append((float(hi), area * math.fsum(total)))
    return trace


def _classify(trace, ratio):
    K = np.array([t[0] for t in trace])
    I = np.array([t[1] for t in trace])
    incr = np.diff(I)
    # increments lost in roundoff mean the trace has already converged
    floor = 1e3 * np.finfo(float).eps * np.maximum(np.abs(I[1:]), np.abs(I[:-1]))
    usable = np.abs(incr) > floor
    if usable.sum() < 3:
        return "finite", I[-1], -math.inf
    idx = np.flatnonzero(usable)[-6:]
    logK = np.log(K[1:][idx])
    logD = np.log(np.abs(incr[idx]))
    p, c = np.polyfit(logK, logD, 1)
    resid = float(np.max(np.abs(logD - (p * logK + c))))
    # three growth models for the partial integrals: const (p < 0), log (p = 0), power (p > 0)
    span = logK[-1] - logK[0]
    signal = abs(p) * span
    if signal >= 10.0 * resid and p < 0:
        r = ratio**p
        return "finite", I[-1] + incr[-1] * r / (1.0 - r), p
    if signal >= 10.0 * resid and p > 0:
        return "power", math.nan, p
    flat = float(np.max(np.abs(logD - logD.mean())))
    if abs(p) < 0.05 and flat <= 0.1:
        return "log", math.nan, 0.0
    raise NumericalError(
        "coincidence-limit trace is neither Cauchy nor power/log growth",
        diagnostics={"exponent": p, "residual": resid, "trace": trace},
    )


def uv_coincidence_limit(params, polarization="transverse", d=None, radii=None, ratio=2.0):
    """Classify the coincidence limit of ``<A A>`` as finite or divergent.

    Parameters
    ----------
    params : ModelParams
        Family (``n``), cutoff and a finite scale ``s > 0``; ``params.d`` is
        used when ``d`` is not given.
    polarization : str
    d : int, optional
        Dimension of the momentum integral; any positive integer.
    radii : sequence of float, optional
        Refinement schedule; defaults to ``cutoff * ratio**j`` for
        ``j = 0..40``.

    Returns
    -------
    RegularityReport
    """
    d = check_int(d if d is not None else params.d, "d", 1)
    if params.is_fixed_point or params.s == 0.0:
        raise ValidationError("use a finite s > 0 (the fixed point is IR singular, s = 0 is trivial)")
    state = cmera_state(ModelParams(d=d, cutoff=params.cutoff, s=params.s, n=params.n))
    if radii is None:
        radii = params.cutoff * ratio ** np.arange(0, 41)
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0):
        raise ValidationError("radii must be strictly increasing")
    trace = coincidence_trace(state, polarization, d, radii)
    growth, estimate, p = _classify(trace, ratio)
    return RegularityReport(
        d=d,
        n=params.n,
        polarization=check_polarization(polarization),
        verdict="finite" if growth == "finite" else "divergent",
        growth=growth,
        estimate=float(estimate),
        exponent=float(p),
        trace=trace,
    )


def large_k_expansion_check(params, k_probe):
    """Compare ``1/alpha`` at large ``k`` with its two-term expansion.

    The subleading coefficient is read off by direct subtraction,
    ``(1/alpha - 1/alpha_inf) k^(2n)``, and compared with
    ``(cutoff^(2n) - m^(2n)) / (2 cutoff)`` (transverse) and
    ``cutoff (m^(2n) - cutoff^(2n)) / (2 m^2)`` (longitudinal).

    Returns
    -------
    dict
        Measured and expected coefficients and relative deviations per
        polarization. At ``s = 0`` both coefficients vanish and the
        absolute values are reported instead.
    """
    k = check_positive(k_probe, "k_probe")
    lam = params.cutoff
    n = params.n
    s = check_scale(params.s, allow_inf=False)
    state = cmera_state(params)
    m = state.mass_
    q = 2 * n
    out = {}
    expected = {
        "transverse": (lam**q - m**q) / (2.0 * lam),
        "longitudinal": lam * (m**q - lam**q) / (2.0 * m * m),
    }
    limits = {"transverse": 1.0 / lam, "longitudinal": lam / (m * m)}
    for pol in ("transverse", "longitudinal"):
        measured = (1.0 / float(state.alpha(pol, k)) - limits[pol]) * k**q
        exp = expected[pol]
        if s == 0.0:
            dev = abs(measured)
        else:
            dev = abs(measured - exp) / abs(exp)
        out[pol] = {"measured": measured, "expected": exp, "deviation": dev}
    return out


def appendix_b_norm(params, tol=1e-10):
    """``||f_s||_2`` of the regular part of ``<Pi Pi>`` in one dimension.

    ``||f_s||^2 = (1/2pi) \\int dk (alpha_par(k, s)/2 - m(s)^2/(2 cutoff))^2``
    over the whole line, by Parseval. The subtracted constant is the
    large-k limit, so ``f_s`` is what remains after the on-site delta.
    """
    if params.d != 1:
        raise ValidationError("the norm is defined for d = 1")
    if params.is_fixed_point:
        return 0.0
    if params.s == 0.0:
        return 0.0
    state = cmera_state(params)

    def integrand(k):
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        pos = k > 0
        out[pos] = (0.5 * state.alpha_excess("longitudinal", k[pos])) ** 2
        return out

    lam = params.cutoff
    m = state.mass_
    pts = sorted({0.1 * m, m, 10 * m, 0.1 * lam, lam, 10 * lam})
    value, err = integrate_to_infinity(integrand, 0.0, abs_tol=1e-300, rel_tol=0.1 * tol, breakpoints=pts)
    return math.sqrt(value / math.pi)
