"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class ConvergenceError(RuntimeError):
    """A quadrature evaluation exhausted its refinement budget."""


class UnreliableRatioError(ArithmeticError):
    """A density ratio whose denominator is too small to divide through."""


class BudgetExhaustedError(RuntimeError):
    """Rejection sampling fell below the feasible acceptance-rate floor."""
