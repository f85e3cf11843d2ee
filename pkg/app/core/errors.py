"""Domain exceptions.

Every error carries an HTTP-style ``status_code`` so the API layer can turn
it into a response without a per-route mapping table.
"""

from __future__ import annotations

from collections.abc import Sequence


class MastermindError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str, *, status_code: int = 400) -> None:
        super().__init__(message)
        self.status_code = status_code


class ArgumentError(MastermindError, ValueError):
    """Malformed arguments: length mismatches, out-of-range values."""


class ContractViolationError(MastermindError):
    """A strategy broke the memory-restricted scheme or emitted a malformed guess."""

    def __init__(self, message: str) -> None:
        super().__init__(message, status_code=500)


class LayoutCorruptionError(ContractViolationError):
    """A stored string could not be decoded under its layout."""


class InfeasibleLayoutError(MastermindError):
    """The requested layout does not fit into n positions."""

    def __init__(self, message: str) -> None:
        super().__init__(message, status_code=422)


class EnumerationBudgetError(MastermindError):
    """Brute-force enumeration would exceed the configured candidate budget."""

    def __init__(self, message: str) -> None:
        super().__init__(message, status_code=422)


class InconsistentAnswersError(MastermindError):
    """No code agrees with every recorded answer."""

    def __init__(self, message: str, constraints: Sequence[tuple[str, int]] = ()) -> None:
        super().__init__(message, status_code=409)
        self.constraints = list(constraints)
