"""Exception types raised by the map-decomposition toolkit."""


class DynamapError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DynamapError):
    """Array shapes are inconsistent with the declared dimensions."""


class NonHermitianInput(DynamapError):
    """A matrix that must be Hermitian fails the Hermiticity residual bound."""


class NotPSD(DynamapError):
    """A matrix that must be positive semidefinite has a negative eigenvalue
    below the zero threshold."""


class NonHermitianChoi(DynamapError):
    """The Choi matrix of a map is not Hermitian, i.e. the map does not
    preserve Hermiticity."""


class NotTracePreserving(DynamapError):
    """The map fails the trace-preservation condition."""


class SingularJ(DynamapError):
    """The positive-part trace functional is singular; this cannot happen for
    a trace-preserving input and signals inconsistent data."""


class NotCompleteKraus(DynamapError):
    """Kraus operators do not satisfy the completeness relation, so the map
    cannot be dilated to a unitary."""


class NotUnitary(DynamapError):
    """A matrix that must be unitary fails the unitarity residual bound."""
