"""Exception hierarchy for sweetspot."""


class SweetspotError(Exception):
    """Base class for every error raised by sweetspot."""
    pass


class DomainError(SweetspotError, ValueError):
    """Raised when a parameter lies outside its mathematical domain."""
    pass


class UnstableSystemError(SweetspotError):
    """Raised when the arrival rate meets or exceeds the service capacity."""
    pass


class InfeasibleBudgetError(SweetspotError):
    """Raised when a response-time budget is at or below the M/M/1 floor."""
    pass


class BudgetTooLooseError(SweetspotError):
    """Raised when even immediate shutdown responds faster than the budget.

    No nonnegative idle threshold meets the budget with equality; callers
    treating the budget as an inequality should use tau_c = 0.
    """
    pass


class InfeasibleError(SweetspotError):
    """Raised when no decision in the search space meets the budget."""
    pass


class NoClosedFormError(SweetspotError):
    """Raised when a configuration has no analytic counterpart."""
    pass


class ScenarioParseError(SweetspotError):
    """Raised when a scenario file or override cannot be parsed."""
    pass


class EmitError(SweetspotError):
    """Raised when output files cannot be written."""
    pass
