"""Shared exception types."""


class NumericIntegrityError(RuntimeError):
    """Floating-point state drifted past a validated tolerance."""


class BudgetExceededError(RuntimeError):
    """Experiment refused to run: projected shot volume exceeds the budget."""

    def __init__(self, message: str, estimate: int | None = None,
                 budget: int | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget
