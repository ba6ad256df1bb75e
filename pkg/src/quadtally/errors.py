"""Exception hierarchy shared by all quadtally modules."""


class QuadtallyError(Exception):
    """Base class for all errors raised by this package."""


class NotSquarefree(QuadtallyError):
    """The radicand D has a square factor."""


class OutOfScope(QuadtallyError):
    """The field Q(sqrt(D)) is outside the covered family.

    Carries a machine-readable ``code`` plus the oracle evidence that
    justified the rejection (class number, unit norm, factorization).
    """

    def __init__(self, code: str, message: str, **evidence):
        super().__init__(message)
        self.code = code
        self.evidence = evidence


class Overflow(QuadtallyError):
    """An exact computation exceeded its configured bound."""


class CapacityExceeded(QuadtallyError):
    """A requested truncation bound exceeds the configured capacity."""


class OutOfRange(QuadtallyError):
    """An index lies outside the truncated range of a coefficient array."""


class ParityViolation(QuadtallyError):
    """(a0[n] + aminus[n]) turned out odd: the local tables are inconsistent."""


class UnsupportedPrime(QuadtallyError):
    """No local table covers this field/prime combination."""


class MethodUnsupported(QuadtallyError):
    """The requested evaluation method does not apply to this field."""


class QuadratureFailure(QuadtallyError):
    """Numerical integration could not reach the requested accuracy."""

    def __init__(self, message: str, achieved_error: float):
        super().__init__(message)
        self.achieved_error = achieved_error


class NonConvergence(QuadtallyError):
    """A series estimate's error bound exceeds the requested tolerance."""

    def __init__(self, message: str, error_bound: float):
        super().__init__(message)
        self.error_bound = error_bound


class TooLarge(QuadtallyError):
    """A finite-ring enumeration was requested beyond the exhaustive scale."""


class DepthInsufficient(QuadtallyError):
    """A character's conductor exceeds the faithful depth of the model ring."""
