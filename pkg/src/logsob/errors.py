"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A precondition on an input parameter was violated.

    ``precondition`` names the violated rule in a short machine-readable form
    (e.g. ``"gamma > 0"``) so the CLI can echo it back in its error JSON.
    """

    def __init__(self, message, precondition=None):
        super().__init__(message)
        self.precondition = precondition or message


class InvariantError(RuntimeError):
    """A computed quantity broke a hard invariant (e.g. a negative seminorm)."""
