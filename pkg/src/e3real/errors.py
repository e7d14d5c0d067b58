"""Exception types shared across the package."""


class E3RealError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(E3RealError, ValueError):
    """Input violates a structural invariant (Hermiticity, unitarity, constraints)."""


class DomainError(E3RealError, ValueError):
    """Input lies on an excluded locus, e.g. zeta = 0 or y = 0."""


class UsageError(E3RealError, ValueError):
    """Unknown option, suite, map name or integral kind."""


class IntegrationError(E3RealError, RuntimeError):
    """A step produced non-finite values or an implicit solve failed."""


class StiffnessError(IntegrationError):
    """Adaptive step size collapsed below the underflow threshold."""
