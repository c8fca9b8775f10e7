"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation
    (non-Hermitian, indefinite or singular matrix)."""


class ConvergenceError(ArithmeticError):
    """A numerical search (bracketing, bisection, ascent) failed."""
