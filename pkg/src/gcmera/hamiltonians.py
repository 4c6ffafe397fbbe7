"""Quadratic mode Hamiltonians and their Gaussian ground states.

Each polarization sector carries the energy density

    (1/2) [a(k) Pi(-k) Pi(k) + b(k) A(-k) A(k)]

whose ground state has ``alpha = sqrt(b / a)`` and whose normal modes
oscillate at ``omega = sqrt(a b)``. The gauge theory removes the
longitudinal sector through Gauss's law; such forms are flagged
``longitudinal_constrained``.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._validation import check_momenta, check_polarization, check_positive, unwrap
from .alpha_models import CustomState, ModelParams
from .exceptions import DomainError, ValidationError


@dataclass(frozen=True)
class ModeQuadraticForm:
    """Per-mode coefficients of a quadratic Hamiltonian.

    ``a_par`` and ``b_par`` are ``None`` when the longitudinal sector is
    constrained.
    """

    a_perp: Callable
    b_perp: Callable
    a_par: Optional[Callable] = None
    b_par: Optional[Callable] = None
    longitudinal_constrained: bool = False
    d: int = 3
    cutoff: float = 1.0
    label: str = "custom"
    notes: dict = field(default_factory=dict)

    def coefficients(self, polarization, k):
        """Return ``(a(k), b(k))`` for one polarization."""
        polarization = check_polarization(polarization)
        k, scalar = check_momenta(k)
        if polarization == "longitudinal":
            if self.longitudinal_constrained:
                raise DomainError("the longitudinal sector is removed by the gauge constraint")
            a, b = self.a_par(k), self.b_par(k)
        else:
            a, b = self.a_perp(k), self.b_perp(k)
        a = np.broadcast_to(np.asarray(a, dtype=float), k.shape).copy()
        b = np.broadcast_to(np.asarray(b, dtype=float), k.shape).copy()
        return unwrap(a, scalar), unwrap(b, scalar)


def _const(value):
    return lambda k: np.full(np.shape(k), value, dtype=float)


def _require(params):
    if not isinstance(params, ModelParams):
        raise ValidationError("expected a ModelParams instance")
    return params


def build_massless_u1(params):
    """Maxwell theory: transverse ``a = 1, b = k^2``; longitudinal constrained."""
    params = _require(params)
    return ModeQuadraticForm(
        a_perp=_const(1.0),
        b_perp=lambda k: np.asarray(k, dtype=float) ** 2,
        longitudinal_constrained=True,
        d=params.d,
        cutoff=params.cutoff,
        label="massless_u1",
    )


def build_massive(params, m):
    """Proca theory with mass ``m``.

    Transverse ``a = 1, b = k^2 + m^2``; longitudinal ``a = 1 + k^2/m^2,
    b = m^2``.
    """
    params = _require(params)
    m = check_positive(m, "m")
    m2 = m * m
    return ModeQuadraticForm(
        a_perp=_const(1.0),
        b_perp=lambda k: np.asarray(k, dtype=float) ** 2 + m2,
        a_par=lambda k: 1.0 + np.asarray(k, dtype=float) ** 2 / m2,
        b_par=_const(m2),
        d=params.d,
        cutoff=params.cutoff,
        label="massive",
        notes={"mass": m},
    )


def build_parent(params, regulated=True):
    """UV-regulated massive Hamiltonian with mass ``m(s)`` at finite ``s``.

    The regulator multiplies the transverse ``Pi Pi`` term and the
    longitudinal ``A A`` term by ``1 + k^2/cutoff^2``. With
    ``regulated=False`` the regulator is dropped, which leaves the plain
    massive theory (useful as a negative control).
    """
    params = _require(params)
    if params.is_fixed_point:
        raise ValidationError("build_parent needs a finite s; use build_parent_fixed_point")
    m = params.mass
    if not regulated:
        form = build_massive(params, m)
        return ModeQuadraticForm(**{**form.__dict__, "label": "parent_unregulated"})
    lam2 = params.cutoff**2
    m2 = m * m

    def reg(k):
        return 1.0 + np.asarray(k, dtype=float) ** 2 / lam2

    return ModeQuadraticForm(
        a_perp=reg,
        b_perp=lambda k: np.asarray(k, dtype=float) ** 2 + m2,
        a_par=lambda k: 1.0 + np.asarray(k, dtype=float) ** 2 / m2,
        b_par=lambda k: m2 * reg(k),
        d=params.d,
        cutoff=params.cutoff,
        label="parent",
        notes={"mass": m, "s": params.s},
    )


def build_parent_fixed_point(params):
    """Regulated Maxwell theory: transverse ``a = 1 + k^2/cutoff^2, b = k^2``."""
    params = _require(params)
    lam2 = params.cutoff**2
    return ModeQuadraticForm(
        a_perp=lambda k: 1.0 + np.asarray(k, dtype=float) ** 2 / lam2,
        b_perp=lambda k: np.asarray(k, dtype=float) ** 2,
        longitudinal_constrained=True,
        d=params.d,
        cutoff=params.cutoff,
        label="parent_fixed_point",
    )


def build_onsite(params):
    """Ultralocal Hamiltonian ``a = 1, b = cutoff^2``; its ground state is unentangled."""
    params = _require(params)
    lam2 = params.cutoff**2
    return ModeQuadraticForm(
        a_perp=_const(1.0),
        b_perp=_const(lam2),
        a_par=_const(1.0),
        b_par=_const(lam2),
        d=params.d,
        cutoff=params.cutoff,
        label="onsite",
    )


def _ground_alpha(a_fn, b_fn):
    def alpha(k):
        a = np.asarray(a_fn(k), dtype=float)
        b = np.asarray(b_fn(k), dtype=float)
        if np.any(a <= 0) or np.any(b < 0):
            raise DomainError("ground state needs a(k) > 0 and b(k) >= 0")
        return np.sqrt(b / a)

    return alpha


def ground_state_of(form):
    """Gaussian ground state of ``form`` as a fitted :class:`CustomState`."""
    return CustomState(
        alpha_par=None if form.longitudinal_constrained else _ground_alpha(form.a_par, form.b_par),
        alpha_perp=_ground_alpha(form.a_perp, form.b_perp),
        longitudinal_constrained=form.longitudinal_constrained,
        d=form.d,
        cutoff=form.cutoff,
    ).fit()


def dispersion(form, polarization, k):
    """Normal-mode frequency ``omega(k) = sqrt(a(k) b(k))``."""
    a, b = form.coefficients(polarization, k)
    if np.any(np.asarray(a) <= 0) or np.any(np.asarray(b) < 0):
        raise DomainError("dispersion needs a(k) > 0 and b(k) >= 0")
    return np.sqrt(np.asarray(a) * np.asarray(b)) if np.ndim(a) else math.sqrt(a * b)


@dataclass(frozen=True)
class ParentReport:
    passed: bool
    max_deviation: float
    worst_k: float
    worst_polarization: str
    tol: float
    deviations: dict

    def as_dict(self):
        out = {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "worst_k": self.worst_k,
            "worst_polarization": self.worst_polarization,
            "tol": self.tol,
        }
        for pol, value in self.deviations.items():
            out[f"max_deviation_{pol}"] = value
        return out


def verify_parent(state, form, k_grid, tol=1e-10):
    """Compare a state's spectra with the ground state of ``form`` on a grid.

    The deviation is ``|alpha_state - sqrt(b/a)| / sqrt(b/a)`` maximized over
    the grid and over unconstrained sectors. A mismatch in the gauge
    constraint counts as an infinite deviation. Failures are reported, not
    raised.
    """
    k, _ = check_momenta(k_grid)
    k = np.atleast_1d(k).ravel()
    ground = ground_state_of(form)
    worst = (0.0, float("nan"), "")
    per_pol = {}
    for pol in ("transverse", "longitudinal"):
        state_constrained = pol == "longitudinal" and state.longitudinal_constrained
        form_constrained = pol == "longitudinal" and form.longitudinal_constrained
        if state_constrained or form_constrained:
            dev = 0.0 if state_constrained == form_constrained else math.inf
            per_pol[pol] = dev
            if dev > worst[0]:
                worst = (dev, float(k[0]), pol)
            continue
        ref = ground.alpha(pol, k)
        got = state.alpha(pol, k)
        rel = np.abs(got - ref) / np.abs(ref)
        i = int(np.argmax(rel))
        per_pol[pol] = float(rel[i])
        if rel[i] > worst[0] or not worst[2]:
            worst = (float(rel[i]), float(k[i]), pol)
    return ParentReport(
        passed=bool(worst[0] <= tol),
        max_deviation=worst[0],
        worst_k=worst[1],
        worst_polarization=worst[2],
        tol=tol,
        deviations=per_pol,
    )
