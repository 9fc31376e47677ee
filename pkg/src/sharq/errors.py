"""Exception types shared across the package."""


class SharqError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SharqError):
    """Invalid parameter, flag, or configuration value."""


class DataError(SharqError):
    """Dataset violates a precondition (empty, inconsistent, ...)."""


class ParseError(DataError):
    """Malformed input file; the message names the offending line."""


class RuleValidationError(SharqError):
    """A rule violates its invariants; the message names the record."""


class MeasureError(SharqError):
    """An interestingness measure is undefined for the given input."""


class OracleBudgetError(SharqError):
    """The naive coalition enumeration would exceed its budget.

    Carries the offending coalition count so callers can report it and
    redirect to the optimized computation.
    """

    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(
            f"naive computation needs {count} coalitions, over the budget of "
            f"{budget}; use the optimized method instead"
        )
