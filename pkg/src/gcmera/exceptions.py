"""Exception hierarchy shared by every gcmera module."""


class GCMERAError(Exception):
    """Base class for all errors raised by gcmera."""


class ValidationError(GCMERAError, ValueError):
    """Invalid model parameters or malformed user input."""


class DomainError(GCMERAError, ValueError):
    """A quantity was requested outside the domain where it is defined.

    Examples are the zero mode ``k = 0`` or the longitudinal ``<A A>``
    correlator of a gauge-invariant state.
    """


class NumericalError(GCMERAError, RuntimeError):
    """A numerical procedure did not reach the requested accuracy.

    Parameters
    ----------
    message : str
        Human readable description.
    estimate : float, optional
        Best value obtained before giving up.
    error : float, optional
        Achieved error estimate.
    diagnostics : dict, optional
        Extra information (partial sums, refinement traces, ...).
    """

    def __init__(self, message, estimate=None, error=None, diagnostics=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.diagnostics = dict(diagnostics or {})
