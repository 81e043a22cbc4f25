"""Exception hierarchy. CLI exit statuses map onto these."""


class MagintError(Exception):
    """Base class for library errors."""


class DomainError(MagintError, ValueError):
    """Evaluation outside a field's or family's declared domain."""


class ContractError(MagintError, ValueError):
    """A precondition of an operation is violated (e.g. jet order too low)."""


class QuadratureError(MagintError, ArithmeticError):
    pass


class ConstructionError(MagintError):
    """A family cannot be built for the requested parameters."""


class DegenerateBranchError(ConstructionError):
    """Parameters select a degenerate branch whose integral reduces to a first-order one."""


class BlowUpError(MagintError, ArithmeticError):
    """An ODE solution left every bounded set before the end of its window."""

    def __init__(self, message, abscissa):
        super().__init__(message)
        self.abscissa = abscissa


class SingularityError(BlowUpError):
    """A solution of the y(phi) equation reached y = 0."""


class ComplexBError(MagintError, ValueError):
    """A root triple implies B^2 < 0, so no real B exists."""

    def __init__(self, message, A, B2, K):
        super().__init__(message)
        self.A, self.B2, self.K = A, B2, K


class PatternError(MagintError, ValueError):
    """Roots do not match the requested multiplicity pattern."""


class BracketError(MagintError, ArithmeticError):
    """Root bracketing failed while inverting an implicit relation."""


class StiffnessError(MagintError, ArithmeticError):
    """Step size underflow during trajectory integration."""


class AccuracyError(MagintError, ArithmeticError):
    """A discretization is too coarse or too narrow for the requested accuracy."""
