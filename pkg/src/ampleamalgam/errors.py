"""Exception hierarchy shared by the whole package."""


class AmpleError(Exception):
    """Base class for every error raised by this package."""


class InputError(AmpleError, ValueError):
    """An argument violates the precondition of the operation."""


class ParseError(InputError):
    """Text or JSON input could not be decoded."""

    def __init__(self, message, token=None):
        if token is not None:
            message = f"{message}: {token!r}"
        super().__init__(message)
        self.token = token


class ResourceError(AmpleError):
    """A configured size cap was exceeded."""


class ConsistencyError(AmpleError):
    """Two independent computations that must agree did not."""
