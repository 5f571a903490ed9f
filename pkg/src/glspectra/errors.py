"""Exception hierarchy shared by all glspectra modules."""


class GLSpectraError(Exception):
    """Base class for all library errors."""


class DomainError(GLSpectraError):
    """Argument outside the analyticity/definition domain of an operator."""


class ModelSpecError(GLSpectraError):
    """Invalid model specification. Carries the offending field path."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ConvergenceError(GLSpectraError):
    """A truncated limit failed to stabilise within its term budget."""


class QuadratureError(GLSpectraError):
    """Adaptive quadrature exhausted its refinement budget."""


class DivergenceDetected(GLSpectraError):
    """Dyadic endpoint refinement grew without bound (integral diverges)."""


class UnboundedContourError(GLSpectraError):
    """The complex-line decay envelope never fell below tolerance."""


class UnsupportedModelError(GLSpectraError):
    """No closed form exists and the Mellin route lacks usable decay."""


class SmoothnessError(GLSpectraError):
    """Requested derivative order exceeds the smoothness index of nu."""


class SupportError(GLSpectraError):
    """Evaluation point outside the support (0, rho) of the invariant law."""


class MembershipWarning(GLSpectraError, UserWarning):
    """The requested co-eigenfunction is known to lie outside L2(nu).

    Doubles as a warning category: pointwise evaluation still succeeds
    under `warnings.warn`, while norm-dependent operations raise it.
    """


class TimeBelowThreshold(GLSpectraError):
    """Heat-kernel expansion requested below the trusted time threshold."""


class ClassError(GLSpectraError):
    """Operation requires a model class the given model does not belong to."""


class UnsupportedJumpsError(GLSpectraError):
    """Jump family cannot be simulated exactly (infinite activity)."""


class ConfigError(GLSpectraError):
    """Invalid simulation configuration."""


class HorizonError(GLSpectraError):
    """Lamperti clock did not ring within the simulated horizon."""
