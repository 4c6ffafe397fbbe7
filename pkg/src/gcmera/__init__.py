"""Gaussian continuous-MERA states for free U(1) vector bosons.

Closed-form and quadrature alpha spectra under the entangling scale flow,
parent-Hamiltonian checks, position-space correlators with their
distributional parts, gauge and UV-regularity diagnostics, and a
one-dimensional lattice oracle.
"""
__version__ = "0.1.0"

from .alpha_models import (
    FIXED_POINT,
    CustomState,
    FixedPointState,
    GaussianVectorState,
    GeneralizedCMERAState,
    MagicCMERAState,
    MassiveTargetState,
    MasslessTargetState,
    ModelParams,
    UnentangledState,
    cmera_state,
    eval_alpha,
    fixed_point_state,
    generalized_cmera_state,
    magic_cmera_state,
    massive_target,
    massless_target,
    unentangled_state,
)
from .correlators import (
    CorrelatorSpec,
    CorrelatorTransformer,
    convergence_in_s,
    momentum_density,
    position_correlator,
    subtracted_correlator,
    tensor_density,
)
from .diagnostics import (
    appendix_b_norm,
    gauge_violation,
    gauge_violation_decay,
    large_k_expansion_check,
    uv_coincidence_limit,
)
from .exceptions import DomainError, GCMERAError, NumericalError, ValidationError
from .flow import (
    EntanglerProfile,
    fixed_point_residual,
    flow_alpha_quadrature,
    flow_pde_residual,
    generalized_profile,
    magic_profile,
    profile_position_space,
)
from .hamiltonians import (
    ModeQuadraticForm,
    build_massive,
    build_massless_u1,
    build_onsite,
    build_parent,
    build_parent_fixed_point,
    dispersion,
    ground_state_of,
    verify_parent,
)
from .lattice import build_lattice, compare_with_continuum, lattice_correlator
from .transforms import (
    RadialFunction,
    SubtractedCorrelator,
    delta_coefficients,
    power_law_transform,
    radial_fourier,
    radial_fourier_damped,
    shifted_power_transform,
    subtract_asymptotics,
)

__all__ = [
    "CorrelatorSpec",
    "CorrelatorTransformer",
    "CustomState",
    "DomainError",
    "EntanglerProfile",
    "FIXED_POINT",
    "FixedPointState",
    "GCMERAError",
    "GaussianVectorState",
    "GeneralizedCMERAState",
    "MagicCMERAState",
    "MassiveTargetState",
    "MasslessTargetState",
    "ModeQuadraticForm",
    "ModelParams",
    "NumericalError",
    "RadialFunction",
    "SubtractedCorrelator",
    "UnentangledState",
    "ValidationError",
    "appendix_b_norm",
    "build_lattice",
    "build_massive",
    "build_massless_u1",
    "build_onsite",
    "build_parent",
    "build_parent_fixed_point",
    "cmera_state",
    "compare_with_continuum",
    "convergence_in_s",
    "delta_coefficients",
    "dispersion",
    "eval_alpha",
    "fixed_point_residual",
    "fixed_point_state",
    "flow_alpha_quadrature",
    "flow_pde_residual",
    "gauge_violation",
    "gauge_violation_decay",
    "generalized_cmera_state",
    "generalized_profile",
    "ground_state_of",
    "large_k_expansion_check",
    "lattice_correlator",
    "magic_cmera_state",
    "magic_profile",
    "massive_target",
    "massless_target",
    "momentum_density",
    "position_correlator",
    "power_law_transform",
    "profile_position_space",
    "radial_fourier",
    "radial_fourier_damped",
    "shifted_power_transform",
    "subtract_asymptotics",
    "subtracted_correlator",
    "tensor_density",
    "unentangled_state",
    "uv_coincidence_limit",
    "verify_parent",
]
