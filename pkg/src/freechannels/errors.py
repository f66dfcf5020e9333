"""Exception types shared across the library."""


class InvalidMatrixError(ValueError):
    """Matrix fails a structural requirement (square, Hermitian, PSD)."""


class InvalidDimensionError(ValueError):
    """Dimension arguments are zero, negative or mutually inconsistent."""


class NotNormalizedError(ValueError):
    """State vector norm deviates too far from one."""


class InvalidParameterError(ValueError):
    """Scalar parameter lies outside its admissible range."""


class TooLargeError(ValueError):
    """Requested problem size exceeds a resource guard."""


class DegenerateParameterError(ValueError):
    """Parameters produce a trivial or empty random model."""


class NumericalFailureError(RuntimeError):
    """A numerical routine failed to reach its target accuracy."""
