"""Shared exception types.

Exit-code mapping used by the CLI: parse errors exit 2, capacity errors
exit 3, invariant violations found by `verify` exit 1.
"""


class InputError(ValueError):
    """A precondition on user-supplied data was violated."""


class CapacityError(RuntimeError):
    """An exact computation was requested above its configured size bound."""


class ParseError(InputError):
    """Malformed arc-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
