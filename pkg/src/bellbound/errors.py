"""Exception hierarchy shared by the library and the CLI."""


class BellBoundError(Exception):
    """Base class for all library errors."""


class DomainError(BellBoundError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedPhaseError(BellBoundError, ValueError):
    """The phase parameter nu is not supported by the requested operation."""


class RepresentationError(BellBoundError, ValueError):
    """A representation does not apply to the given scenario or assignment."""


class BudgetExceededError(BellBoundError):
    """Exhaustive search would scan more assignments than the budget allows."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"exhaustive search needs {required} assignments, budget is {budget}"
        )
        self.required = required
        self.budget = budget


class ReductionMismatchError(BellBoundError):
    """A named function does not match its claimed GBF reduction."""

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class WitnessNotFoundError(BellBoundError):
    """No assignment attaining the constraint bound was found."""
