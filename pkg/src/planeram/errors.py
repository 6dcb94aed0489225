"""Exception classes shared across modules."""


class TheoremViolation(AssertionError):
    """A proved inequality failed on geometrically realizable input.

    This always signals a bug in the computation, never a property of the
    input.
    """


class BudgetExceeded(RuntimeError):
    """A search hit its node or point budget.

    ``partial`` carries whatever was computed before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
