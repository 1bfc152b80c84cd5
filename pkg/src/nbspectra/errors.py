"""Exception hierarchy shared by every nbspectra module."""


class NBSpectraError(Exception):
    """Base class for all errors raised by this package."""


class GraphParseError(NBSpectraError, ValueError):
    """Malformed graph6 / edge-list input.

    ``offset`` is the byte (graph6) or line (edge list) position of the fault.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class PreconditionError(NBSpectraError, ValueError):
    """An operation was called outside its documented domain."""


class CapabilityError(NBSpectraError):
    """Input exceeds a hard desk-scale cap (enumeration size, search size)."""


class ReconstructionError(NBSpectraError):
    """A digraph cannot be the non-backtracking graph of a simple graph."""


class NumericError(NBSpectraError, ArithmeticError):
    """A floating-point routine failed to meet its accuracy contract."""
