"""Exception types shared across the package."""


class ShcError(Exception):
    """Base class for package-specific errors."""


class InvalidProfileError(ShcError, ValueError):
    """A scaling profile produced a non-finite or non-positive value."""


class InvalidModelError(ShcError, ValueError):
    """A Levy model violates its construction contract."""


class InvalidCutoffError(ShcError, ValueError):
    """A small-jump cutoff has infinite (or undefined) tail mass."""


class QuadratureError(ShcError, RuntimeError):
    """Numerical integration failed to converge; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateScaleError(ShcError, ValueError):
    """A map that must be monotone failed the monotonicity check."""


class BracketError(ShcError, ValueError):
    """Target value lies outside the inversion bracket."""


class IndeterminateClassificationError(ShcError, RuntimeError):
    """Variation diagnostic inconclusive and no declaration given."""


class ClassificationConflictError(ShcError, ValueError):
    """Declared variation class contradicts the numerical diagnostic."""


class NonUniqueProjectionError(ShcError, ValueError):
    """Point too deep in the domain for a unique boundary projection."""


class UnboundedDomainError(ShcError, ValueError):
    """Operation requires a bounded domain."""


class SurfaceQualityError(ShcError, RuntimeError):
    """Too many projection failures while building a surface rule."""


class DivergentPerimeterError(ShcError, ValueError):
    """Nonlocal perimeter requested for an unbounded-variation model."""
