"""Exception taxonomy shared across the toolkit.

The CLI maps these onto its exit-code contract; library callers catch them
directly.
"""


class IwkitError(Exception):
    """Base class for all toolkit errors."""


class InputError(IwkitError):
    """Malformed or inconsistent input: mixed primes or precisions, non-square
    matrices, non-monic divisors, unreadable files."""


class ZeroSeriesError(IwkitError):
    """An operation that needs a nonzero series received one that is
    indistinguishable from zero at the working precision."""


class DegreeOverflowError(IwkitError):
    """A construction does not fit below the degree cap."""

    def __init__(self, message: str, required_cap: int | None = None):
        super().__init__(message)
        self.required_cap = required_cap


class PrecisionExhaustedError(IwkitError):
    """A rank, length or vanishing question cannot be settled at the working
    precision (an elementary divisor fell inside the ambiguity margin)."""


class UndefinedResultError(IwkitError):
    """A mathematically undefined quantity was requested, e.g. a tower index
    whose transition map has infinite kernel at every requested level."""
