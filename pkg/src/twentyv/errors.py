"""Exception hierarchy shared by every module."""


class TwentyVError(Exception):
    """Base class for all package errors."""


class PoleError(TwentyVError, ZeroDivisionError):
    pass


class ZeroOmegaZero(TwentyVError, ZeroDivisionError):
    pass


class InvalidSize(TwentyVError, ValueError):
    pass


class IceRuleViolation(TwentyVError, ValueError):
    pass


class DomainMismatch(TwentyVError, ValueError):
    pass


class OutOfDomain(TwentyVError, ValueError):
    pass


class SizeCapExceeded(TwentyVError, ValueError):
    pass


class IndexOutOfRange(TwentyVError, IndexError):
    pass


class DegenerateSpectral(TwentyVError, ValueError):
    pass


class NoConvergence(TwentyVError, RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidRegion(TwentyVError, ValueError):
    pass


class NotALimitCase(TwentyVError, ValueError):
    pass


class NonFiniteValue(TwentyVError, ArithmeticError):
    pass


class PhaseViolation(TwentyVError, ValueError):
    """Raised when parameters fall outside the supported real regime."""

    def __init__(self, violated):
        self.violated = list(violated)
        super().__init__("parameters violate: " + "; ".join(self.violated))
