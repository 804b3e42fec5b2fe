"""Exception types raised across the package."""


class GdseriesError(Exception):
    """Base class for every error raised by this package."""


class ExponentDenominatorMismatch(GdseriesError):
    pass


class SpecMismatch(GdseriesError):
    pass


class VariableSetMismatch(GdseriesError):
    pass


class NonzeroConstantTerm(GdseriesError):
    pass


class BadConstantTerm(GdseriesError):
    pass


class UnknownFamily(GdseriesError):
    pass


class UnsupportedAlpha(GdseriesError):
    pass


class UnknownGrade(GdseriesError):
    pass


class GradeTooHigh(GdseriesError):
    pass


class UnsupportedTransfer(GdseriesError):
    """Raised for nodes the transfer rules do not cover (general Hadamard, non-alpha scaling)."""


class RecurrenceMismatch(GdseriesError):
    pass


class SizeLimit(GdseriesError):
    pass


class CalibrationAmbiguous(GdseriesError):
    pass


class CalibrationFailed(GdseriesError):
    pass


class DivisionByZeroError(GdseriesError, ZeroDivisionError):
    pass
