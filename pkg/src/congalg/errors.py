"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or mismatched input (bad file, literal, size mismatch)."""


class ResourceError(RuntimeError):
    """A configured budget or cap was exceeded."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class PreconditionError(ValueError):
    """An operation was called on input that violates its precondition."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
