"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`QuantumGraphError`, and the input-validation ones also derive from
:class:`ValueError` so that generic callers can catch them the usual way.
"""


class QuantumGraphError(Exception):
    """Base class for all library errors."""


class GraphError(QuantumGraphError, ValueError):
    pass


class DisconnectedGraph(GraphError):
    pass


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonpositiveLength(GraphError):
    pass


class OutOfRange(GraphError):
    pass


class NotPrime(QuantumGraphError, ValueError):
    pass


class UnsupportedDegree(QuantumGraphError, ValueError):
    pass


class DegreeMismatch(QuantumGraphError, ValueError):
    pass


class MissingCondition(QuantumGraphError, ValueError):
    pass


class DimensionMismatch(QuantumGraphError, ValueError):
    pass


class NotAnEigenvalue(QuantumGraphError, ValueError):
    pass


class ZeroVector(QuantumGraphError, ValueError):
    pass


class NonpositiveArgument(QuantumGraphError, ValueError):
    pass


class UnsupportedOrder(QuantumGraphError, ValueError):
    pass


class NotApplicable(QuantumGraphError, ValueError):
    pass


class NotAStar(QuantumGraphError, ValueError):
    pass


class BadRange(QuantumGraphError, ValueError):
    pass


class EmptyEnsemble(QuantumGraphError, ValueError):
    pass


class ParseError(QuantumGraphError, ValueError):
    """Malformed input file; carries the offending line and/or field."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class ValidationError(QuantumGraphError, ValueError):
    """Well-formed input that violates a model invariant."""

    def __init__(self, invariant, message=""):
        super().__init__(f"{invariant}: {message}" if message else invariant)
        self.invariant = invariant


class WindowTooCoarse(UserWarning):
    """Two spectral points fell inside one scan bracket."""
