"""Exception types shared across the package."""


class TrimLabelError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TrimLabelError):
    """Structurally invalid input: bad index, malformed value, inconsistent
    embedding, or an infeasible labeling passed where a feasible one is
    required.  Distinct from a validation *report*, which is a value."""


class ParseError(InputError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(TrimLabelError):
    """A size guard or node budget refused the computation.

    Raised instead of silently running an exponential enumeration; never a
    wrong answer."""
