"""Exception hierarchy shared by every module of the package."""


class StackyError(Exception):
    """Base class for all errors raised by :mod:`stacky`."""


class DimensionMismatch(StackyError, ValueError):
    pass


class LPTooLarge(StackyError, ValueError):
    """Raised when Fourier-Motzkin elimination is asked to handle too many variables."""


class EmptyPolytope(StackyError):
    pass


class UnboundedPolytope(StackyError):
    pass


class InvalidStackyPolytope(StackyError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidFan(StackyError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StratumNotInFamily(StackyError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class RankDeficientRho(StackyError, ValueError):
    pass


class NotRegularValue(StackyError):
    pass


class EmptyOrUnboundedPolytope(StackyError):
    pass


class NotFreeError(StackyError, ValueError):
    """The operation needs a torsion-free module."""


class InputError(StackyError, ValueError):
    """Base class for problems with user-supplied documents."""

    def __init__(self, message, path=""):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class SchemaError(InputError):
    pass


class RangeError(InputError):
    pass


class RationalFormatError(InputError):
    pass
