"""Exception hierarchy shared across the package."""


class SpecbalError(Exception):
    pass


class InvalidInputError(SpecbalError, ValueError):
    pass


class ParseError(InvalidInputError):
    """Instance file could not be read. ``location`` pinpoints the offending entry."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class MalformedFileError(ParseError):
    pass


class DimensionMismatchError(ParseError):
    pass


class AsymmetricMatrixError(ParseError):
    pass


class NonFiniteValueError(ParseError):
    pass


class NumericalError(SpecbalError, ArithmeticError):
    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class ConvergenceError(NumericalError):
    """Iterative solver ran out of budget. ``x`` holds the last iterate, if any."""

    def __init__(self, message, diagnostics=None, x=None):
        super().__init__(message, diagnostics)
        self.x = x


class PartialColoringFailure(SpecbalError, RuntimeError):
    def __init__(self, message, best_fraction=0.0, restarts=0):
        self.best_fraction = best_fraction
        self.restarts = restarts
        super().__init__(message)
