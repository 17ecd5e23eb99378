"""Exception types shared across the package."""


class GenoqError(Exception):
    """Base class for all package errors."""


class ValidationError(GenoqError, ValueError):
    """Input failed a precondition (bad sequence, bad shape, bad flag)."""


class CapExceededError(GenoqError):
    """A requested register is larger than the configured qubit cap."""


class InfiniteDivergenceError(GenoqError, ValueError):
    """A divergence is unbounded for the given pair of distributions."""


class DegenerateEncodingError(GenoqError, ValueError):
    """An encoder produced (or would produce) the zero vector."""
