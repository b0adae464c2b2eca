"""Exception types raised across the package."""


class GapForgeError(Exception):
    """Base class for all package errors."""


class ValidationError(GapForgeError, ValueError):
    """Invalid input value or inconsistent arguments."""


class SizeLimitError(ValidationError):
    """Requested size exceeds the configured cap."""


class ParseError(ValidationError):
    """Malformed textual or JSON input."""


class NotReversibleError(GapForgeError):
    """Detailed balance fails for a (K, pi) pair that should satisfy it."""


class NumericalError(GapForgeError):
    """Eigensolver failure or an impossible spectral configuration."""


class ResourceError(GapForgeError):
    """Computation would exceed the configured work budget."""
