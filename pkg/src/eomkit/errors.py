"""Exception types shared across the package."""


class EomkitError(Exception):
    """Base class for domain errors raised by this package."""


class BudgetExceededError(EomkitError):
    """An enumeration would materialize more elements than the budget allows."""


class EmptySupportError(EomkitError):
    """A requested model carries zero probability mass."""


class ConditioningError(EmptySupportError):
    """The conditioning event has zero probability."""


class NonExchangeableError(EomkitError):
    """An operation requiring an exchangeable distribution received one that is not."""
