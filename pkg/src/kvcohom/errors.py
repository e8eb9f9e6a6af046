"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "KVError",
    "DimensionError",
    "InputError",
    "PreconditionError",
    "BudgetError",
    "DegenerateFitError",
]


class KVError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(KVError, ValueError):
    """Shapes or ambient dimensions of operands do not line up."""


class InputError(KVError, ValueError):
    """Malformed input: bad files, bad CLI arguments, bad parameters."""


class PreconditionError(KVError, ValueError):
    """A mathematical precondition failed (e.g. the product is not KV)."""


class BudgetError(KVError):
    """A cochain-space allocation would exceed the configured entry budget."""

    def __init__(self, degree: int, cells: int, budget: int) -> None:
        self.degree = degree
        self.cells = cells
        self.budget = budget
        super().__init__(
            f"cochain space at degree {degree} needs {cells} entries, "
            f"which exceeds the budget of {budget}"
        )


class DegenerateFitError(KVError):
    """A fit window carries no usable signal (flat or vanishing residual)."""
