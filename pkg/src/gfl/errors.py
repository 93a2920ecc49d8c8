"""Exception hierarchy."""


class GflError(Exception):
    """Base class for all package errors."""


class StructuralError(GflError, ValueError):
    """Objects of incompatible shape were combined."""


class EmptyVector(GflError, ValueError):
    pass


class ZeroInput(GflError, ValueError):
    pass


class ZeroInversion(GflError, ZeroDivisionError):
    """An attempt to invert the zero element of A."""


class AlreadyRemoved(GflError, ValueError):
    pass


class CapExceeded(GflError):
    """Completion produced an element above the degree cap.

    ``partial`` carries the state reached so far for diagnostics.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}


class ParseError(GflError, ValueError):
    """Syntax or scope error, with a 1-based source location."""

    def __init__(self, message, line=1, column=1, kind="syntax"):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


class MalformedCertificate(GflError, ValueError):
    """A certificate violates one of its invariants, named by ``invariant``."""

    def __init__(self, invariant, detail=""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
        self.detail = detail


class WrongProblem(GflError, ValueError):
    """Certificate digest does not match the problem."""


class SamplingExhausted(GflError):
    pass


class PointOutsideWitnessLocus(GflError, ValueError):
    """The witness vanishes at the requested specialization point."""
