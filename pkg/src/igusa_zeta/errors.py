"""Exception hierarchy shared by all modules.

``ValidationError`` subclasses signal bad input (CLI exit code 2);
``ResourceError`` subclasses signal an aborted computation (exit code 3).
"""


class IgusaError(Exception):
    """Base class for all package errors."""


class ValidationError(IgusaError):
    """Invalid input: parse errors, violated preconditions."""


class ParseError(ValidationError):
    pass


class ConstraintViolated(ValidationError):
    pass


class PrecisionMismatch(ValidationError):
    pass


class TooManyVariables(ValidationError):
    pass


class ZeroAngular(IgusaError):
    """Angular component of an element indistinguishable from 0."""


class ZeroPolynomial(IgusaError):
    """Operation undefined on the zero polynomial."""


class NotUnimodular(ValidationError):
    """Substitution matrix is not invertible over the ring of integers."""


class DivisionByZeroFactor(ValidationError):
    """Geometric closure with the trivial factor (a, b) = (0, 0)."""


class NontrivialCharacter(ValidationError):
    """Numeric series expansion requested for non-rational coefficients."""


class IdentityFailed(IgusaError):
    """A symbolic identity that must hold by construction did not."""


class NotHomogenizable(IgusaError):
    """No weight vector lets the unit variable factor out."""


class WrongShape(ValidationError):
    """Polynomial does not match the shape required by a fast path."""


class ResourceError(IgusaError):
    """Computation aborted due to a configured limit."""


class NonTerminating(ResourceError):
    """Recursion neither closed on itself nor exhausted within the limit."""

    def __init__(self, message, chain=()):
        super().__init__(message)
        self.chain = list(chain)


class BudgetExceeded(ResourceError):
    """Enumeration would exceed the evaluation budget."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget
