class DgaError(Exception):
    """Base class for errors raised by dgakit."""


class PresentationError(DgaError):
    """Malformed or inconsistent presentation text."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class ResourceLimitError(DgaError):
    """A configurable size cap was exceeded."""


class HypothesisError(DgaError):
    """A mathematical precondition of an operation does not hold."""


class InfiniteSearchSpace(HypothesisError):
    pass
