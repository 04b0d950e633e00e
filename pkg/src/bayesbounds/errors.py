"""Exception hierarchy shared by all modules."""


class BoundsError(Exception):
    """Base class for every error raised by this package."""


class InvalidPmf(BoundsError, ValueError):
    pass


class EmptyPmf(InvalidPmf):
    pass


class NegativeWeight(InvalidPmf):
    pass


class SumOutOfTolerance(InvalidPmf):
    pass


class ZeroEvidence(BoundsError, ValueError):
    """All joint terms prior * likelihood vanish; the posterior is undefined."""


class MaxDepthExceeded(BoundsError, ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance.

    The best available estimate and its error bound are attached so callers
    can decide whether the partial answer is usable.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DimensionTooLarge(BoundsError, ValueError):
    pass


class DimensionMismatch(BoundsError, ValueError):
    pass


class BetaNonNegative(BoundsError, ValueError):
    pass


class NotBinary(BoundsError, ValueError):
    pass


class NegativeEquivocation(BoundsError, ValueError):
    pass


class OutOfRange(BoundsError, ValueError):
    pass


class InvalidDensity(BoundsError, ValueError):
    pass


class InvalidChannel(BoundsError, ValueError):
    pass


class NumericallyUnstable(BoundsError, ArithmeticError):
    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class BudgetExceeded(BoundsError, RuntimeError):
    pass
