"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised for malformed inputs: wrong dimensions, out-of-range parameters."""


class InvalidState(ValueError):
    """Raised when a matrix that should be a density matrix is not one."""


class NumericalFailure(RuntimeError):
    """Raised when an iterative routine fails to converge within its budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
