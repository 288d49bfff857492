"""Exception hierarchy shared by every module."""


class SigmaGroupError(Exception):
    """Base class for all errors raised by the toolkit."""


class UnitIdeal(SigmaGroupError):
    pass


class NotGroebner(SigmaGroupError):
    pass


class LevelTooSmall(SigmaGroupError):
    pass


class LevelNotBuilt(SigmaGroupError):
    pass


class BudgetExceeded(SigmaGroupError):
    pass


class NotStabilized(SigmaGroupError):
    """Raised when a tower never settles within the built depth.

    ``partial`` carries whatever data was computed before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class Unsupported(SigmaGroupError):
    pass


class FactorDegreeExceeded(SigmaGroupError):
    pass


class AmbientMismatch(SigmaGroupError):
    pass


class UnrecognizedGeneratorType(SigmaGroupError):
    pass


class NotATorus(SigmaGroupError):
    pass


class NotCharacterCoefficients(SigmaGroupError):
    pass


class ParseError(SigmaGroupError):
    """Syntax error in difference-polynomial text."""

    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
