"""Gaussian vector-boson states and their closed-form alpha spectra.

A Gaussian state of the free vector field is fixed by two positive functions
``alpha_par(k)`` and ``alpha_perp(k)``: the modes annihilated by the state are

    a(k) = sqrt(alpha(k) / 2) A(k) + i sqrt(1 / (2 alpha(k))) Pi(k)

for the longitudinal and for each of the ``d - 1`` transverse polarizations.
Every state here is a scikit-learn style estimator: hyperparameters go in the
constructor, :meth:`fit` validates them and freezes the spectrum, and
:meth:`transform` maps a column of momenta to ``[alpha_par, alpha_perp]``.

All formulas are evaluated in the dimensionless variable ``kappa = k / cutoff``
and the ratio ``mu = m(s) / cutoff = exp(-s)``.
"""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import (
    check_int,
    check_momenta,
    check_polarization,
    check_positive,
    check_scale,
    unwrap,
)
from .exceptions import DomainError, ValidationError

#: Scale marker for the fixed point of the entangling evolution.
FIXED_POINT = math.inf

LABELS = (
    "unentangled",
    "massless_target",
    "massive_target",
    "cmera_magic",
    "cmera_generalized",
    "custom",
)


@dataclass(frozen=True)
class ModelParams:
    """Knobs shared by every formula.

    Parameters
    ----------
    d : int
        Number of spatial dimensions.
    cutoff : float
        UV cutoff momentum (the entangling scale).
    s : float
        Scale parameter; ``FIXED_POINT`` (``math.inf``) selects the fixed point.
    n : int
        Regularity order. ``n = 1`` is the magic family, ``n > 1`` the more
        strongly regulated family.
    """

    d: int = 3
    cutoff: float = 1.0
    s: float = 0.0
    n: int = 1

    def __post_init__(self):
        check_int(self.d, "d", 1)
        object.__setattr__(self, "cutoff", check_positive(self.cutoff, "cutoff"))
        object.__setattr__(self, "s", check_scale(self.s))
        check_int(self.n, "n", 1)

    @property
    def is_fixed_point(self):
        return math.isinf(self.s)

    @property
    def mass(self):
        """``m(s) = cutoff * exp(-s)``; zero at the fixed point."""
        return mass_at_scale(self.cutoff, self.s)


def mass_at_scale(cutoff, s):
    return 0.0 if math.isinf(s) else cutoff * math.exp(-s)


@dataclass(frozen=True)
class PolarizationSpectrum:
    alpha_par: Callable
    alpha_perp: Callable
    longitudinal_constrained: bool = False


class GaussianVectorState(TransformerMixin, BaseEstimator):
    """Base class for Gaussian states of the vector field.

    Subclasses implement ``_alpha_par`` and ``_alpha_perp`` on validated float
    arrays of momenta.
    """

    label = "custom"
    longitudinal_constrained = False

    def __init__(self, d=3, cutoff=1.0):
        self.d = d
        self.cutoff = cutoff

    def _scale(self):
        return 0.0

    def _order(self):
        return 1

    def _check_extra_params(self):
        pass

    def _state_mass(self):
        return self.params_.mass

    def fit(self, X=None, y=None):
        """Validate hyperparameters and freeze the spectrum.

        ``X`` and ``y`` are ignored; they are accepted so the state can sit in
        a pipeline.
        """
        self.params_ = ModelParams(d=self.d, cutoff=self.cutoff, s=self._scale(), n=self._order())
        self._check_extra_params()
        self.mass_ = self._state_mass()
        self.spectrum_ = PolarizationSpectrum(
            alpha_par=self.alpha_par,
            alpha_perp=self.alpha_perp,
            longitudinal_constrained=self.longitudinal_constrained,
        )
        return self

    def alpha(self, polarization, k):
        check_is_fitted(self, "spectrum_")
        polarization = check_polarization(polarization)
        k, scalar = check_momenta(k)
        if polarization == "longitudinal":
            if self.longitudinal_constrained:
                values = np.zeros_like(k)
            else:
                values = self._alpha_par(k)
        else:
            values = self._alpha_perp(k)
        return unwrap(values, scalar)

    def alpha_par(self, k):
        return self.alpha("longitudinal", k)

    def alpha_perp(self, k):
        return self.alpha("transverse", k)

    def transform(self, X):
        """Evaluate both spectra on a column of momenta.

        Parameters
        ----------
        X : array-like of shape (n_samples,) or (n_samples, 1)
            Momenta, all strictly positive.

        Returns
        -------
        ndarray of shape (n_samples, 2)
            Columns ``alpha_par`` and ``alpha_perp``.
        """
        check_is_fitted(self, "spectrum_")
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValidationError("expected a single column of momenta")
            X = X[:, 0]
        return np.column_stack([self.alpha_par(X), self.alpha_perp(X)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["alpha_par", "alpha_perp"], dtype=object)


class _ScaleFlowState(GaussianVectorState):
    """States produced by the constant-entangler flow from the product state.

    They share the structure ``alpha_perp = cutoff * sqrt(P(kappa))`` and
    ``alpha_par = m(s)^2 / alpha_perp`` where ``P -> 1`` at large momentum.
    The ``excess`` helpers return differences from the large-k constants
    without cancellation, which the correlator and regularity code relies on.
    """

    def _mu(self):
        s = self._scale()
        return 0.0 if math.isinf(s) else math.exp(-s)

    def _ratio(self, kappa):
        """Return ``P`` and ``1 - P`` evaluated without cancellation."""
        raise NotImplementedError

    def _alpha_perp(self, k):
        P, _ = self._ratio(k / self.params_.cutoff)
        return self.params_.cutoff * np.sqrt(P)

    def _alpha_par(self, k):
        P, _ = self._ratio(k / self.params_.cutoff)
        return self.params_.cutoff * self._mu() ** 2 / np.sqrt(P)

    def alpha_limit(self, polarization):
        """Large-momentum limit of ``alpha``."""
        check_is_fitted(self, "spectrum_")
        polarization = check_polarization(polarization)
        if polarization == "transverse":
            return self.params_.cutoff
        if self.longitudinal_constrained:
            return 0.0
        return self.params_.cutoff * self._mu() ** 2

    def alpha_excess(self, polarization, k):
        """``alpha(k) - alpha_limit``."""
        check_is_fitted(self, "spectrum_")
        polarization = check_polarization(polarization)
        k, scalar = check_momenta(k)
        P, Q = self._ratio(k / self.params_.cutoff)
        root = np.sqrt(P)
        lam = self.params_.cutoff
        if polarization == "transverse":
            values = -lam * Q / (1.0 + root)
        elif self.longitudinal_constrained:
            values = np.zeros_like(k)
        else:
            values = lam * self._mu() ** 2 * Q / (root * (1.0 + root))
        return unwrap(values, scalar)

    def inverse_alpha_excess(self, polarization, k):
        """``1 / alpha(k) - 1 / alpha_limit``."""
        check_is_fitted(self, "spectrum_")
        polarization = check_polarization(polarization)
        k, scalar = check_momenta(k)
        P, Q = self._ratio(k / self.params_.cutoff)
        root = np.sqrt(P)
        lam = self.params_.cutoff
        if polarization == "transverse":
            values = Q / (lam * root * (1.0 + root))
        elif self.longitudinal_constrained:
            raise DomainError("1/alpha_par is undefined on the gauge-invariant fixed point")
        else:
            values = -Q / (lam * self._mu() ** 2 * (1.0 + root))
        return unwrap(values, scalar)


class UnentangledState(_ScaleFlowState):
    """Product state with ``alpha_par = alpha_perp = cutoff``."""

    label = "unentangled"

    def __init__(self, d=3, cutoff=1.0):
        super().__init__(d=d, cutoff=cutoff)

    def _ratio(self, kappa):
        return np.ones_like(kappa), np.zeros_like(kappa)


class MasslessTargetState(GaussianVectorState):
    """Ground state of the Maxwell Hamiltonian: ``alpha_perp = k``.

    The longitudinal sector is removed by Gauss's law; it is stored as
    ``alpha_par = 0`` together with ``longitudinal_constrained = True``.
    """

    label = "massless_target"
    longitudinal_constrained = True

    def __init__(self, d=3, cutoff=1.0):
        super().__init__(d=d, cutoff=cutoff)

    def _state_mass(self):
        return 0.0

    def _alpha_par(self, k):
        return np.zeros_like(k)

    def _alpha_perp(self, k):
        return k.copy()


class MassiveTargetState(GaussianVectorState):
    """Ground state of the Proca Hamiltonian with the given mass."""

    label = "massive_target"

    def __init__(self, d=3, cutoff=1.0, mass=1.0):
        super().__init__(d=d, cutoff=cutoff)
        self.mass = mass

    def _state_mass(self):
        return check_positive(self.mass, "mass")

    def _alpha_par(self, k):
        return self.mass_**2 / np.hypot(k, self.mass_)

    def _alpha_perp(self, k):
        return np.hypot(k, self.mass_)


class MagicCMERAState(_ScaleFlowState):
    """State reached at finite scale ``s`` with the magic entangler.

    ``alpha_perp(k, s) = cutoff * sqrt((k^2 + m^2) / (k^2 + cutoff^2))`` and
    ``alpha_par = m^2 / alpha_perp`` with ``m = cutoff * exp(-s)``.
    """

    label = "cmera_magic"

    def __init__(self, d=3, cutoff=1.0, s=0.0):
        super().__init__(d=d, cutoff=cutoff)
        self.s = s

    def _scale(self):
        return check_scale(self.s, allow_inf=False)

    def _ratio(self, kappa):
        s = self.params_.s
        if s == 0.0:
            return np.ones_like(kappa), np.zeros_like(kappa)
        mu = self._mu()
        k2 = kappa * kappa
        P = (k2 + mu * mu) / (k2 + 1.0)
        Q = -math.expm1(-2.0 * s) / (k2 + 1.0)
        return P, Q


def _generalized_ratio(kappa, n, s):
    """``P`` and ``1 - P`` for the order-``n`` family, overflow safe.

    For ``kappa > 1`` every polynomial is divided by ``kappa**(2n)``.
    ``s = inf`` gives the fixed-point spectrum.
    """
    q = 2 * n
    mu = 0.0 if math.isinf(s) else math.exp(-s)
    mu_q2 = mu ** (q - 2)
    one_m_mu_q = -math.expm1(-q * s) if not math.isinf(s) else 1.0
    one_m_mu_2 = -math.expm1(-2.0 * s) if not math.isinf(s) else 1.0

    kappa = np.asarray(kappa, dtype=float)
    P = np.empty_like(kappa)
    Q = np.empty_like(kappa)

    lo = kappa <= 1.0
    if np.any(lo):
        kl = kappa[lo]
        kq = kl**q
        k2 = kl * kl
        A = kq + k2
        B = kq + k2 * mu_q2
        P[lo] = (A / (A + 1.0)) * ((B + mu**q) / B)
        Q[lo] = (kq * one_m_mu_q + k2 * mu_q2 * one_m_mu_2) / ((A + 1.0) * B)
    hi = ~lo
    if np.any(hi):
        kh = kappa[hi]
        t = kh ** (-q)
        u = kh ** (2 - q)
        A = 1.0 + u
        B = 1.0 + u * mu_q2
        P[hi] = (A / (A + t)) * ((B + mu**q * t) / B)
        Q[hi] = t * (one_m_mu_q + u * mu_q2 * one_m_mu_2) / ((A + t) * B)
    return P, Q


class GeneralizedCMERAState(_ScaleFlowState):
    """Finite-scale state for the order-``n`` entangler family (``n >= 2``)."""

    label = "cmera_generalized"

    def __init__(self, d=3, cutoff=1.0, s=0.0, n=2):
        super().__init__(d=d, cutoff=cutoff)
        self.s = s
        self.n = n

    def _scale(self):
        return check_scale(self.s, allow_inf=False)

    def _order(self):
        return check_int(self.n, "n", 2)

    def _ratio(self, kappa):
        if self.params_.s == 0.0:
            return np.ones_like(kappa), np.zeros_like(kappa)
        return _generalized_ratio(kappa, self.params_.n, self.params_.s)


class FixedPointState(_ScaleFlowState):
    """Gauge-invariant ``s -> inf`` limit of the flow.

    ``n = 1`` gives ``alpha_perp = cutoff * k / sqrt(k^2 + cutoff^2)``; larger
    ``n`` gives the fixed point of the order-``n`` family. The longitudinal
    sector obeys ``Pi_par |psi> = 0``.
    """

    longitudinal_constrained = True

    def __init__(self, d=3, cutoff=1.0, n=1):
        super().__init__(d=d, cutoff=cutoff)
        self.n = n

    @property
    def label(self):
        return "cmera_magic" if self.n == 1 else "cmera_generalized"

    def _scale(self):
        return FIXED_POINT

    def _order(self):
        return check_int(self.n, "n", 1)

    def _ratio(self, kappa):
        if self.params_.n == 1:
            k2 = kappa * kappa
            return k2 / (k2 + 1.0), 1.0 / (k2 + 1.0)
        return _generalized_ratio(kappa, self.params_.n, math.inf)


class CustomState(GaussianVectorState):
    """State built from user-supplied spectrum callables.

    ``alpha_par`` is ignored when ``longitudinal_constrained`` is true.
    """

    label = "custom"

    def __init__(self, alpha_par=None, alpha_perp=None, longitudinal_constrained=False, d=3, cutoff=1.0):
        super().__init__(d=d, cutoff=cutoff)
        self.alpha_par_fn = alpha_par
        self.alpha_perp_fn = alpha_perp
        self.longitudinal_constrained = longitudinal_constrained

    # BaseEstimator introspects __init__ argument names.
    def get_params(self, deep=True):
        return {
            "alpha_par": self.alpha_par_fn,
            "alpha_perp": self.alpha_perp_fn,
            "longitudinal_constrained": self.longitudinal_constrained,
            "d": self.d,
            "cutoff": self.cutoff,
        }

    def set_params(self, **params):
        for key, value in params.items():
            if key in ("alpha_par", "alpha_perp"):
                setattr(self, key + "_fn", value)
            elif key in ("longitudinal_constrained", "d", "cutoff"):
                setattr(self, key, value)
            else:
                raise ValidationError(f"invalid parameter {key!r}")
        return self

    def _check_extra_params(self):
        if self.alpha_perp_fn is None or not callable(self.alpha_perp_fn):
            raise ValidationError("alpha_perp must be callable")
        if not self.longitudinal_constrained and not callable(self.alpha_par_fn):
            raise ValidationError("alpha_par must be callable for an unconstrained state")

    def _alpha_par(self, k):
        return np.asarray(self.alpha_par_fn(k), dtype=float)

    def _alpha_perp(self, k):
        return np.asarray(self.alpha_perp_fn(k), dtype=float)


# -- constructors taking ModelParams ----------------------------------------


def _require(params):
    if not isinstance(params, ModelParams):
        raise ValidationError("expected a ModelParams instance")
    return params


def unentangled_state(params):
    params = _require(params)
    return UnentangledState(d=params.d, cutoff=params.cutoff).fit()


def massless_target(params):
    params = _require(params)
    return MasslessTargetState(d=params.d, cutoff=params.cutoff).fit()


def massive_target(params, m):
    params = _require(params)
    return MassiveTargetState(d=params.d, cutoff=params.cutoff, mass=m).fit()


def magic_cmera_state(params):
    params = _require(params)
    if params.is_fixed_point:
        raise ValidationError("magic_cmera_state needs a finite s; use fixed_point_state")
    return MagicCMERAState(d=params.d, cutoff=params.cutoff, s=params.s).fit()


def generalized_cmera_state(params):
    params = _require(params)
    if params.n < 2:
        raise ValidationError("the generalized family is defined for n >= 2")
    if params.is_fixed_point:
        raise ValidationError("generalized_cmera_state needs a finite s; use fixed_point_state")
    return GeneralizedCMERAState(d=params.d, cutoff=params.cutoff, s=params.s, n=params.n).fit()


def fixed_point_state(params):
    params = _require(params)
    return FixedPointState(d=params.d, cutoff=params.cutoff, n=params.n).fit()


def cmera_state(params):
    """Dispatch on ``params.s`` and ``params.n`` to the matching flow state."""
    params = _require(params)
    if params.is_fixed_point:
        return fixed_point_state(params)
    if params.n == 1:
        return magic_cmera_state(params)
    return generalized_cmera_state(params)


def eval_alpha(state, polarization, k):
    """Evaluate one polarization of a fitted state at momentum ``k > 0``."""
    return state.alpha(polarization, k)
