"""Exception hierarchy shared across the package."""


class EPCError(Exception):
    """Base class for every error raised by epcodes."""


class NonPrimeModulus(EPCError, ValueError):
    pass


class DuplicateNode(EPCError, ValueError):
    pass


class DimensionMismatch(EPCError, ValueError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class IndivisibleDimensions(EPCError, ValueError):
    pass


class InsufficientFieldSize(EPCError, ValueError):
    pass


class PointCollision(EPCError, ValueError):
    pass


class NotEnoughResults(EPCError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"need {needed} results to decode, got {got}")
        self.needed = needed
        self.got = got


class DuplicatePoint(EPCError, ValueError):
    pass


class ModeForbidsSystematic(EPCError, ValueError):
    pass


class YTooSmall(EPCError, ValueError):
    pass


class PoleAtNode(EPCError, ValueError):
    pass


class MTooSmall(EPCError, ValueError):
    pass


class NotSecureMode(EPCError, ValueError):
    pass


class StateSpaceTooLarge(EPCError):
    pass


class InvalidConstruction(EPCError, ValueError):
    pass


class SchemeError(EPCError, ValueError):
    """Descriptor parameters are inconsistent (e.g. N below the threshold)."""


class MalformedHeader(EPCError, ValueError):
    pass


class ValueOutOfRange(EPCError, ValueError):
    pass


class ConfigError(EPCError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
