"""Exception hierarchy shared by all modules."""


class SoncError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SoncError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionMismatch(SoncError, ValueError):
    pass


class InvalidCircuit(SoncError, ValueError):
    """A support/coefficient combination that is not a circuit polynomial.

    ``reason`` is one of the diagnostic tags produced by
    :func:`sonccert.circuit.is_circuit_support` or ``NonpositiveOuterCoefficient``.
    """

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or reason)


class NotASimplex(InvalidCircuit):
    def __init__(self, message=None):
        super().__init__("NotASimplex", message)


class NotInterior(InvalidCircuit):
    def __init__(self, message=None):
        super().__init__("NotInterior", message)


class NonpositiveOuterCoefficient(InvalidCircuit):
    def __init__(self, message=None):
        super().__init__("NonpositiveOuterCoefficient", message)


class DenominatorOverflow(SoncError, ArithmeticError):
    def __init__(self, denominator, bound):
        self.denominator = denominator
        self.bound = bound
        super().__init__(f"common denominator {denominator} exceeds bound {bound}")


class ReductionError(SoncError, ValueError):
    pass


class NonLatticeInnerPoint(ReductionError):
    pass


class DegenerateSupport(ReductionError):
    pass


class ParityMismatch(ReductionError):
    pass


class NotInPolytope(SoncError, ValueError):
    pass


class PositiveInnerCoefficient(SoncError, ValueError):
    pass


class InputNotSymmetric(SoncError, ValueError):
    pass


class CertificateError(SoncError, ValueError):
    pass


class DimensionTooLarge(SoncError, ValueError):
    pass


class BudgetExceeded(SoncError, ValueError):
    pass
