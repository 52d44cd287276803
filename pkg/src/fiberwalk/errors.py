"""Package-wide exception types.

These live in their own module so that the CLI can map them to exit codes
without importing everything else first.
"""

from __future__ import annotations


class BudgetExceededError(RuntimeError):
    """An enumeration or construction would exceed its configured work budget.

    The error carries how much work was completed versus planned so callers
    can report progress instead of silently truncating results.
    """

    def __init__(self, message: str, *, completed: int = 0, planned: int = 0):
        super().__init__(message)
        self.completed = completed
        self.planned = planned

    @property
    def fraction_completed(self) -> float:
        if self.planned <= 0:
            return 0.0
        return self.completed / self.planned


class FinitenessError(ValueError):
    """No strictly positive certificate for fiber finiteness is available.

    Without a strictly positive integer combination of the matrix rows the
    fiber may be infinite, so enumeration refuses to start.
    """


class DependentBasisError(ValueError):
    """The supplied move vectors are linearly dependent.

    ``witness`` is a nonzero integer vector of coefficients summing the moves
    to zero.
    """

    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class MatrixParseError(ValueError):
    """A matrix file or stream is malformed. ``line`` is 1-based."""

    def __init__(self, message: str, *, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
