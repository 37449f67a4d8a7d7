"""Exception types shared across the package."""


class DatxyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DatxyError, ValueError):
    """Input outside the physical or documented domain of an operation."""


class NonConvergence(DatxyError, ArithmeticError):
    """Adaptive quadrature exhausted its depth budget before reaching tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ResourceLimit(DatxyError):
    """Requested exact-diagonalization size exceeds the supported ceiling."""


class NotAState(DatxyError):
    """A reconstructed density matrix failed positivity beyond numerical slack."""


class UnclassifiedPoint(DatxyError):
    """No phase-label criterion fired at a parameter point."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class EmptyWindow(DatxyError, ValueError):
    """A time-averaging window contains no trace samples."""
