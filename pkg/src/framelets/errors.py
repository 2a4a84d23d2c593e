"""Exception types shared across the package.

The CLI maps these onto process exit codes (parse failures -> 2,
precondition violations -> 3, internal invariant breaches -> 4, an empty
solution set -> 5).
"""


class FrameletError(Exception):
    """Base class for package errors."""


class ParseError(FrameletError, ValueError):
    """Malformed input text or JSON."""


class PreconditionError(FrameletError, ValueError):
    """A documented precondition does not hold for the given input."""


class InvariantError(FrameletError, RuntimeError):
    """An internal self-check failed; this indicates a bug, not bad input."""


class NoSolutionError(FrameletError):
    """A solver returned no admissible solution."""
