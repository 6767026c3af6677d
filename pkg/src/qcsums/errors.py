"""Exception hierarchy shared by all modules."""


class QcsError(Exception):
    """Base class for library errors."""


class ValidationError(QcsError, ValueError):
    """Input violates a structural invariant (bad weight, bad permutation, bad k)."""


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(QcsError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class StructureError(QcsError, ValueError):
    """Graph shape unsuitable for the requested sum (e.g. empty out-neighborhood)."""


class PreconditionError(QcsError, ValueError):
    pass


class CapacityError(QcsError, RuntimeError):
    """Problem size exceeds the configured enumeration cap."""
