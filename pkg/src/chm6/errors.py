"""Exception hierarchy shared by all chm6 modules."""


class CHMError(Exception):
    """Base class for every error raised by chm6."""


class StructuralError(CHMError, ValueError):
    """Malformed input: wrong shape, unparsable JSON, bad index sets."""


class DomainError(CHMError, ValueError):
    """A value lies outside the domain an operation accepts."""


class PreconditionError(CHMError, ValueError):
    """A checked precondition of an identity or operation does not hold."""


class InconsistencyError(CHMError, RuntimeError):
    """A step that must succeed on valid input did not.

    Usually signals a tolerance misconfiguration.
    """


class CounterexampleError(CHMError):
    """A classification claim failed on a concrete matrix."""

    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix
