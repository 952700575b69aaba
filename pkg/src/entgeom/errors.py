"""Exception types raised across the package."""


class EntgeomError(Exception):
    """Base class for all package errors."""


class ZeroVector(EntgeomError, ValueError):
    pass


class DimensionMismatch(EntgeomError, ValueError):
    pass


class NotUnitary(EntgeomError, ValueError):
    pass


class NotHermitian(EntgeomError, ValueError):
    pass


class OddDimension(EntgeomError, ValueError):
    pass


class NotSquareDim(EntgeomError, ValueError):
    pass


class BasePointMismatch(EntgeomError, ValueError):
    pass


class TooCoarse(EntgeomError, ValueError):
    pass


class NonpositiveStep(EntgeomError, ValueError):
    pass


class StepBudgetExceeded(EntgeomError, ValueError):
    pass


class OutOfDomain(EntgeomError, ValueError):
    pass


class SingularMetric(EntgeomError, ArithmeticError):
    pass


class ImmersionLost(EntgeomError, ArithmeticError):
    pass


class ParseError(EntgeomError, ValueError):
    pass


class ValidationError(EntgeomError, ValueError):
    """Loaded object violates an invariant; ``invariant`` names which one."""

    def __init__(self, invariant, message=""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)
