"""Exception types shared across the package."""


class PtkrError(Exception):
    """Base class for all package errors."""


class ZeroNorm(PtkrError):
    """State norm underflowed to zero; evolution cannot continue."""


class DimensionMismatch(PtkrError):
    """State and precomputed tables disagree on lattice size."""


class LatticeTooLarge(PtkrError):
    """Dense operator requested for a lattice beyond the cost guard."""


class WindowTooShort(PtkrError):
    """Fit window contains too few samples."""


class NonpositiveWidth(PtkrError):
    """Power-law width fit needs strictly positive variance samples."""


class InconsistentFits(PtkrError):
    """Phase classification inputs are mutually contradictory."""


class ParseError(PtkrError):
    """Configuration text could not be parsed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ValidationError(PtkrError):
    """Configuration parsed but a value violates an invariant."""

    def __init__(self, message, key=None):
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
        self.key = key
