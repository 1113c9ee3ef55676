"""Exception and warning types shared across the package."""


class CohsimError(Exception):
    """Base class for all package errors."""


class DomainError(CohsimError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(CohsimError, RuntimeError):
    """Quadrature or iteration failed to converge.

    Carries the best available estimate so callers can inspect it.
    """

    def __init__(self, message, best_estimate=None, err_est=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.err_est = err_est


class RootNotFoundError(CohsimError, RuntimeError):
    """No sign change found within the scan horizon."""


class AliasingError(CohsimError, ValueError):
    """Grid violates the Fresnel sampling criterion.

    ``required_extent`` is the minimum grid extent (m) that would satisfy
    the criterion at the same sample count.
    """

    def __init__(self, message, required_extent=None):
        super().__init__(message)
        self.required_extent = required_extent


class SamplingError(CohsimError, ValueError):
    """A sampled quantity is under-resolved on its grid."""


class ShapeError(CohsimError, ValueError):
    """Array dimensions do not match the expected grid."""


class ConfigurationError(CohsimError, ValueError):
    """Invalid or inconsistent scenario/source configuration."""


class ValidityError(CohsimError, RuntimeError):
    """A physical-regime validity condition failed in strict mode."""


class UnsupportedRegimeError(CohsimError, ValueError):
    """Operation is not defined for the requested source regime."""


class UnsupportedMaskError(CohsimError, ValueError):
    """Operation is not defined for this mask (e.g. complex-valued)."""


class ValidityWarning(UserWarning):
    """A physical-regime validity condition is violated (non-strict mode)."""
