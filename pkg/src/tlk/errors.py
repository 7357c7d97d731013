"""Exception types shared across the library."""


class TlkError(Exception):
    """Base class for all library-specific errors."""


class UnsupportedOrbitShape(TlkError):
    """An index orbit is not of shape A, B, C or D."""


class NonSphericalSupport(TlkError):
    """A parabolic submatrix needed for a quotient entry is not spherical."""


class RootBudgetExceeded(TlkError):
    """Reflection closure produced more roots than the configured cap."""


class UnrecognizedConfiguration(TlkError):
    """A mesh does not match any of the 19 known configurations."""


class PoleAtSpecialization(TlkError):
    """A denominator vanishes under the requested parameter assignment."""


class InconsistentFamily(TlkError):
    """A residual linear-form constraint fails after solving."""


class UnderdeterminedFamily(TlkError):
    """Some linear-form value is never pinned by the constraints."""


class NotSigmaStable(TlkError):
    """A matrix does not commute with the diagram-automorphism action."""


class DecompositionMismatch(TlkError):
    """A twisted generator does not split as restriction plus form terms."""


class UnsupportedOrbitType(TlkError):
    """The requested analysis is not available for this orbit type."""


class BudgetExceeded(TlkError):
    """An enumeration or span computation exceeded its configured cap."""
