"""Exception types shared by all modules."""


class InvalidInputError(ValueError):
    """An argument does not satisfy the documented precondition."""


class BudgetExceededError(RuntimeError):
    """A computation would exceed its configured resource budget."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


class PrecisionError(ArithmeticError):
    """A coefficient beyond the surviving truncation order was requested."""
