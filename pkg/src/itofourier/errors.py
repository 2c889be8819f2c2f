"""Exception types shared across the package.

Each class also subclasses the closest builtin so callers can keep using
idiomatic ``except ValueError`` / ``except IndexError`` handlers.
"""


class ItoFourierError(Exception):
    """Base class for all package errors."""


class DomainError(ItoFourierError, ValueError):
    """An argument is outside its mathematical domain (e.g. s not in [t, T])."""


class BasisIndexError(ItoFourierError, IndexError):
    """Basis index j exceeds the representable range of the chosen system."""


class ArityError(ItoFourierError, ValueError):
    """A point or index tuple has the wrong number of entries."""


class NumericError(ItoFourierError, ArithmeticError):
    """A numerical procedure failed to converge or produced inconsistent values."""


class CapacityError(ItoFourierError, RuntimeError):
    """A configured size or overflow guard was exceeded."""


class CompatibilityError(ItoFourierError, ValueError):
    """Two objects (tensor/pool, spec/path, ...) do not refer to the same setup."""


class GridCompatibilityError(CompatibilityError):
    """A discretization grid misses required points (basis jumps off-grid)."""


class UnsupportedMultiplicityError(ItoFourierError, ValueError):
    """The requested integral multiplicity is outside the supported range."""


class ConfigError(ItoFourierError, ValueError):
    """A CLI config document is malformed; message carries the field path."""
