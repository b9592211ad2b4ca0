"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: schema problems exit with 2,
precondition failures with 3 and empty searches with 4.
"""


class CDError(Exception):
    """Base class for every error raised by cdpoly."""


class SchemaError(CDError, ValueError):
    """Malformed input data (wrong lengths, bad JSON shapes)."""


class StructureError(SchemaError):
    """A multiplication-order tree does not match its term."""


class PreconditionError(CDError, ValueError):
    """An operation was called outside its domain."""


class SingularError(PreconditionError, ZeroDivisionError):
    """Zero (or numerically zero) input where an invertible one is required."""


class UnsupportedLevelError(PreconditionError):
    """The requested algebra level is outside the supported range."""


class AmbiguousDirectionError(PreconditionError):
    """A negative real has no preferred imaginary direction; pass a hint."""


class NoResultError(CDError):
    """A search finished without finding what was asked for."""
