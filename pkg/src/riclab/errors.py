"""Exception types shared across riclab."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class OutOfRangeError(DomainError):
    """A rate-function inverse was asked for a level it cannot reach."""


class DegenerateError(ArithmeticError):
    """A RIC-derived quantity is undefined (e.g. c_min >= 1)."""


class UnsupportedModelError(DomainError):
    """The requested rate model has no closed form for this quantity."""


class BudgetExceededError(RuntimeError):
    """A combinatorial or sampling budget was exceeded."""
