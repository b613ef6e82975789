"""Exception types shared across the package."""


class RatsymError(Exception):
    """Base class for every error raised by ratsym."""


class DivisionByZero(RatsymError, ZeroDivisionError):
    pass


class DepthCapExceeded(RatsymError):
    pass


class DependentGenerator(RatsymError):
    pass


class SqrtNotInTower(RatsymError):
    """The square root lies outside the allowed tower.

    ``minpoly`` is ``z^2 - x`` as a Poly over the tower of ``x``.
    """

    def __init__(self, value, minpoly=None):
        super().__init__(f"sqrt({value}) is not in the tower")
        self.value = value
        self.minpoly = minpoly


class ZeroDenominator(RatsymError):
    pass


class DegreeBudgetExceeded(RatsymError):
    def __init__(self, degree, budget):
        super().__init__(f"degree {degree} exceeds budget {budget}")
        self.degree = degree
        self.budget = budget


class NeedsExtension(RatsymError):
    """Roots of ``factor`` are not reachable inside the allowed tower."""

    def __init__(self, factor, message=None):
        super().__init__(message or f"roots of {factor} need a larger field")
        self.factor = factor


class DegenerateTriple(RatsymError):
    pass


class ClosureCapExceeded(RatsymError):
    pass


class UnsupportedClass(RatsymError):
    pass


class NotAFixedPoint(RatsymError):
    pass


class ConjugatorNotInTower(RatsymError):
    pass


class RootNotInTower(RatsymError):
    pass


class InexactCriticalData(RatsymError):
    pass


class InfiniteSolutionFamily(RatsymError):
    """A monomial equation system has a positive-dimensional solution set."""


class ExpressionSyntaxError(RatsymError, SyntaxError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.msg = message
        self.offset = offset
