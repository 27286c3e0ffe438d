"""Exception hierarchy shared by all tournsim modules."""


class TournsimError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(TournsimError, ValueError):
    pass


class StructureError(TournsimError, ValueError):
    pass


class SelfComparisonError(TournsimError, ValueError):
    pass


class CapExceededError(TournsimError, ValueError):
    pass


class EmptySetError(TournsimError, ValueError):
    pass


class UnknownSolutionError(TournsimError, ValueError):
    pass


class RangeError(TournsimError, ValueError):
    pass


class DegenerateError(TournsimError, ValueError):
    pass


class EvenVotersError(TournsimError, ValueError):
    pass


class LengthMismatchError(TournsimError, ValueError):
    pass


class PreconditionError(TournsimError, ValueError):
    pass


class PlanError(TournsimError, ValueError):
    """An experiment cell could not be instantiated.

    ``cell`` holds ``(model, n)`` for the offending cell when known.
    """

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class ConfigError(TournsimError, ValueError):
    pass


class ParseError(TournsimError, ValueError):
    """Malformed input text; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
