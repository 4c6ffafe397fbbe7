"""Equal-time two-point functions of Gaussian vector states.

Momentum densities follow from the annihilation-operator form of the state:

    <A A>(k) = 1 / (2 alpha(k)),    <Pi Pi>(k) = alpha(k) / 2,

per polarization, and in two dimensions the magnetic field
``B = d_1 A_2 - d_2 A_1`` has ``<B B>(k) = k^2 / (2 alpha_perp(k))``.
In temporal gauge ``Pi`` is minus the electric field, so electric-field
correlators are the ``Pi`` correlators.

Position-space correlators are returned as ``c0 delta(x) - c2 Laplacian
delta(x) + regular(x)`` using the transform convention of
:mod:`gcmera.transforms`.
"""
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_distance, check_momenta, check_polarization, unwrap
from .alpha_models import (
    GaussianVectorState,
    MasslessTargetState,
    MassiveTargetState,
    ModelParams,
    UnentangledState,
    _ScaleFlowState,
    cmera_state,
)
from .exceptions import DomainError, ValidationError
from .transforms import (
    RadialFunction,
    SubtractedCorrelator,
    delta_coefficients,
    power_law_transform,
    radial_fourier,
    shifted_power_transform,
    subtract_asymptotics,
)

FIELDS = ("A", "Pi", "B")


@dataclass(frozen=True)
class CorrelatorSpec:
    """Which correlator to compute.

    Parameters
    ----------
    field : {"A", "Pi", "B"}
    polarization : {"longitudinal", "transverse"}
        Ignored for ``B``, which is built from the transverse sector.
    representation : {"momentum_density", "position_subtracted"}
    """

    field: str = "B"
    polarization: str = "transverse"
    representation: str = "position_subtracted"

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValidationError(f"field must be one of {FIELDS}, got {self.field!r}")
        pol = "transverse" if self.field == "B" else check_polarization(self.polarization)
        object.__setattr__(self, "polarization", pol)
        if self.representation not in ("momentum_density", "position_subtracted"):
            raise ValidationError(f"unknown representation {self.representation!r}")


def _check_state(state):
    if not isinstance(state, GaussianVectorState):
        raise ValidationError("expected a GaussianVectorState")
    check_is_fitted(state, "spectrum_")
    return state


def _check_b_dimension(state):
    if state.params_.d != 2:
        raise ValidationError("the scalar magnetic field B exists only for d = 2")


def momentum_density(state, spec, k):
    """Scalar momentum-space density of ``spec`` at ``|k| = k``."""
    state = _check_state(state)
    k_arr, scalar = check_momenta(k)
    if spec.field == "B":
        _check_b_dimension(state)
        values = k_arr * k_arr / (2.0 * state.alpha("transverse", k_arr))
    elif spec.field == "A":
        if spec.polarization == "longitudinal" and state.longitudinal_constrained:
            raise DomainError("<A_par A_par> is undefined: the longitudinal sector is pure gauge")
        values = 0.5 / state.alpha(spec.polarization, k_arr)
    else:
        values = 0.5 * state.alpha(spec.polarization, k_arr)
    return unwrap(np.asarray(values, dtype=float), scalar)


def tensor_density(state, field, i, j, k_vec):
    """``<X_i(-k) X_j(k)>`` assembled from the polarization projectors.

    ``(delta_ij - k_i k_j / k^2) c_perp(k) + (k_i k_j / k^2) c_par(k)``.
    A constrained longitudinal sector contributes nothing to ``Pi`` and is
    rejected for ``A``.
    """
    state = _check_state(state)
    if field not in ("A", "Pi"):
        raise ValidationError("tensor densities are defined for A and Pi")
    k_vec = np.asarray(k_vec, dtype=float)
    if k_vec.shape != (state.params_.d,):
        raise ValidationError(f"k_vec must have length d={state.params_.d}")
    d = state.params_.d
    if not (0 <= i < d and 0 <= j < d):
        raise ValidationError("tensor indices out of range")
    k = float(np.linalg.norm(k_vec))
    longitudinal = k_vec[i] * k_vec[j] / (k * k) if k > 0 else None
    if longitudinal is None:
        raise DomainError("the zero mode k = 0 is excluded")
    transverse = (1.0 if i == j else 0.0) - longitudinal
    c_perp = momentum_density(state, CorrelatorSpec(field, "transverse", "momentum_density"), k)
    if field == "Pi" and state.longitudinal_constrained:
        c_par = 0.0
    else:
        c_par = momentum_density(state, CorrelatorSpec(field, "longitudinal", "momentum_density"), k)
    return transverse * c_perp + longitudinal * c_par


# -- position space ---------------------------------------------------------


def _b_constant(state):
    """Exact constant term of the large-k expansion of the B density."""
    lam = state.params_.cutoff
    if isinstance(state, UnentangledState) or state.params_.n > 1:
        return 0.0
    m = state.mass_
    return (lam * lam - m * m) / (4.0 * lam)


def _flow_radial(state, spec):
    """Density of a scale-flow state with its asymptote and stable remainder."""
    lam = state.params_.cutoff
    pol = spec.polarization
    n = state.params_.n
    decay = 2.0 * n
    scales = tuple(sorted({lam, state.mass_} - {0.0}))
    unentangled = isinstance(state, UnentangledState) or state.params_.s == 0.0

    def density(k):
        return momentum_density(state, spec, k)

    if spec.field == "B":
        _check_b_dimension(state)
        c2 = 0.5 / lam
        c0 = _b_constant(state)

        def rem(k):
            k = np.asarray(k, dtype=float)
            return 0.5 * k * k * state.inverse_alpha_excess("transverse", k) - c0

        return RadialFunction(
            func=density, asymptote=(c0, c2), decay_exponent=decay, remainder=rem,
            scales=scales, vanishing=unentangled,
        )
    if spec.field == "A":
        if pol == "longitudinal" and state.longitudinal_constrained:
            raise DomainError("<A_par A_par> is undefined: the longitudinal sector is pure gauge")
        c0 = 0.5 / state.alpha_limit(pol)
        return RadialFunction(
            func=density, asymptote=(c0, 0.0), decay_exponent=decay,
            remainder=lambda k: 0.5 * state.inverse_alpha_excess(pol, k),
            scales=scales, vanishing=unentangled,
        )
    c0 = 0.5 * state.alpha_limit(pol)
    return RadialFunction(
        func=density, asymptote=(c0, 0.0), decay_exponent=decay,
        remainder=lambda k: 0.5 * state.alpha_excess(pol, k),
        scales=scales,
        vanishing=unentangled or (pol == "longitudinal" and state.longitudinal_constrained),
    )


def _target_regular(state, spec, d):
    """Closed-form regular part for the target states, or ``None``."""
    pol = spec.polarization
    if isinstance(state, MasslessTargetState):
        if spec.field == "B":
            return lambda x: 0.5 * power_law_transform(1.0, d, x)
        if pol == "longitudinal":
            if spec.field == "A":
                raise DomainError("<A_par A_par> is undefined: the longitudinal sector is pure gauge")
            return lambda x: 0.0 * np.asarray(x, dtype=float)
        p = -1.0 if spec.field == "A" else 1.0
        return lambda x: 0.5 * power_law_transform(p, d, x)
    if isinstance(state, MassiveTargetState):
        m = state.mass_
        m2 = m * m
        if spec.field == "B":
            # k^2 / (2 sqrt(k^2+m^2)) = (k^2+m^2)^(1/2)/2 - m^2 (k^2+m^2)^(-1/2)/2
            return lambda x: 0.5 * (
                shifted_power_transform(-0.5, m, d, x) - m2 * shifted_power_transform(0.5, m, d, x)
            )
        if pol == "transverse":
            a = 0.5 if spec.field == "A" else -0.5
            return lambda x: 0.5 * shifted_power_transform(a, m, d, x)
        if spec.field == "A":
            return lambda x: 0.5 / m2 * shifted_power_transform(-0.5, m, d, x)
        return lambda x: 0.5 * m2 * shifted_power_transform(0.5, m, d, x)
    return None


def _coefficients(F, scales):
    top = max(scales, default=1.0)
    c0, c2, _ = subtract_asymptotics(F, k_fit_window=(100.0 * top, 1600.0 * top))
    return c0, c2


def subtracted_correlator(state, spec, tol=1e-12, rel_tol=1e-9):
    """Split a position-space correlator into distributional and regular parts.

    The delta and Laplacian-delta coefficients come from Richardson
    extrapolation of the momentum density. The regular part is a callable
    evaluated with :func:`gcmera.transforms.radial_fourier` on the
    cancellation-free remainder, or in closed form for the target states.

    Returns
    -------
    SubtractedCorrelator
    """
    state = _check_state(state)
    d = state.params_.d
    if spec.field == "B":
        _check_b_dimension(state)
    closed = _target_regular(state, spec, d)
    if closed is not None:
        # pure power laws and their shifted versions carry no polynomial part
        return SubtractedCorrelator(0.0, 0.0, _vectorize(closed))

    if isinstance(state, _ScaleFlowState):
        F = _flow_radial(state, spec)
    else:
        F = RadialFunction(func=lambda k: momentum_density(state, spec, k), scales=(state.params_.cutoff,))
    c0, c2 = _coefficients(F, F.scales)
    if not isinstance(state, _ScaleFlowState):
        _, _, F = subtract_asymptotics(F, k_fit_window=(100.0 * max(F.scales), 1600.0 * max(F.scales)))
    delta, lap = delta_coefficients(c0, c2, d)

    def regular(x):
        return radial_fourier(F, d, x, tol=tol, rel_tol=rel_tol)

    return SubtractedCorrelator(delta, lap, _vectorize(regular))


def _vectorize(fn):
    def wrapped(x):
        x_arr, scalar = check_distance(x)
        flat = np.array([float(fn(float(xi))) for xi in x_arr.ravel()])
        return unwrap(flat.reshape(x_arr.shape), scalar)

    return wrapped


def position_correlator(state, spec, x, tol=1e-12, rel_tol=1e-9):
    """Regular part of the position-space correlator at distance(s) ``x > 0``."""
    return subtracted_correlator(state, spec, tol=tol, rel_tol=rel_tol).regular(x)


class CorrelatorTransformer(TransformerMixin, BaseEstimator):
    """Estimator wrapper: fit on a state, transform distances into correlator values.

    Parameters
    ----------
    state : GaussianVectorState
        The state; fitted on demand if it is not fitted yet.
    field, polarization : str
        See :class:`CorrelatorSpec`.
    tol, rel_tol : float
        Transform accuracy.

    Attributes
    ----------
    delta_coeff_, lap_delta_coeff_ : float
        Distributional coefficients found by :meth:`fit`.
    """

    def __init__(self, state=None, field="B", polarization="transverse", tol=1e-12, rel_tol=1e-9):
        self.state = state
        self.field = field
        self.polarization = polarization
        self.tol = tol
        self.rel_tol = rel_tol

    def fit(self, X=None, y=None):
        if self.state is None:
            raise ValidationError("CorrelatorTransformer needs a state")
        spec = CorrelatorSpec(self.field, self.polarization, "position_subtracted")
        state = self.state
        if not hasattr(state, "spectrum_"):
            # sklearn.clone hands back an unfitted copy of the state
            state = clone(state).fit()
        self.correlator_ = subtracted_correlator(state, spec, tol=self.tol, rel_tol=self.rel_tol)
        self.delta_coeff_ = self.correlator_.delta_coeff
        self.lap_delta_coeff_ = self.correlator_.lap_delta_coeff
        return self

    def transform(self, X):
        check_is_fitted(self, "correlator_")
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValidationError("expected a single column of distances")
            X = X[:, 0]
        return np.asarray(self.correlator_.regular(X)).reshape(-1, 1)

    def get_feature_names_out(self, input_features=None):
        return np.array([f"{self.field}_{self.polarization}"], dtype=object)


@dataclass(frozen=True)
class ConvergenceTable:
    """Correlator values on an ``x`` grid, one column per scale.

    ``monotone[i]`` records whether ``|C_s(x_i) - C_fp(x_i)|`` is
    non-increasing along the finite scales, when a fixed-point column exists.
    """

    x: np.ndarray
    labels: tuple
    values: np.ndarray
    delta_coeffs: dict
    monotone: np.ndarray


def column_label(s):
    return "fixed_point" if math.isinf(s) else f"s_{s:g}"


def convergence_in_s(spec, x_grid, s_list, params=None, tol=1e-12, rel_tol=1e-9):
    """Tabulate ``position_correlator`` for a list of scales.

    Parameters
    ----------
    spec : CorrelatorSpec
    x_grid : array-like
        Distances, strictly increasing.
    s_list : sequence of float
        Scales; ``math.inf`` adds the fixed-point column.
    params : ModelParams, optional
        Supplies ``d``, ``cutoff`` and ``n`` (``s`` is ignored).
    """
    params = params or ModelParams(d=2)
    x, _ = check_distance(x_grid)
    x = np.atleast_1d(x)
    if np.any(np.diff(x) <= 0):
        raise ValidationError("x_grid must be strictly increasing")
    labels, columns, deltas = [], [], {}
    for s in s_list:
        state = cmera_state(ModelParams(d=params.d, cutoff=params.cutoff, s=s, n=params.n))
        corr = subtracted_correlator(state, spec, tol=tol, rel_tol=rel_tol)
        label = column_label(s)
        labels.append(label)
        deltas[label] = (corr.delta_coeff, corr.lap_delta_coeff)
        columns.append(np.atleast_1d(corr.regular(x)))
    values = np.column_stack(columns)

    finite = [i for i, s in enumerate(s_list) if not math.isinf(s)]
    fixed = [i for i, s in enumerate(s_list) if math.isinf(s)]
    if fixed and len(finite) > 1:
        order = sorted(finite, key=lambda i: s_list[i])
        gaps = np.abs(values[:, order] - values[:, [fixed[0]]])
        monotone = np.all(np.diff(gaps, axis=1) <= 0, axis=1)
    else:
        monotone = np.ones(len(x), dtype=bool)
    return ConvergenceTable(x=x, labels=tuple(labels), values=values, delta_coeffs=deltas, monotone=monotone)
