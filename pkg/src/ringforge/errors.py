"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed instance/solution/cactus file. Carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleInstanceError(ValueError):
    """The link set cannot cover every 2-cut."""


class StructureError(ValueError):
    """A directed link set lacks the structure every non-shortenable solution has."""


class NotConnectedError(ValueError):
    """Link set is not connected in the link intersection graph."""


class BudgetExceededError(RuntimeError):
    """Oracle enumeration would exceed the configured budget."""


class DecompositionError(RuntimeError):
    """A decomposition postcondition failed; message carries the witness."""
