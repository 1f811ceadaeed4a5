"""Exception types shared across the package."""


class MoonshineError(Exception):
    """Base class for every error raised by frobmoon."""


class InvalidGroupTable(MoonshineError, ValueError):
    pass


class NotLatinSquare(InvalidGroupTable):
    pass


class NotAssociative(InvalidGroupTable):
    pass


class NoIdentity(InvalidGroupTable):
    pass


class BoundExceeded(MoonshineError):
    pass


class BudgetExceeded(MoonshineError):
    pass


class WidthNotAboveDimension(MoonshineError, ValueError):
    pass


class DimensionTooSmall(MoonshineError, ValueError):
    pass


class FractionalPower(MoonshineError, ValueError):
    pass


class UnsupportedLevel(MoonshineError, ValueError):
    pass


class UnsupportedOrder(MoonshineError, ValueError):
    pass


class ZeroTotalMultiplicity(MoonshineError, ZeroDivisionError):
    pass


class PrecisionError(MoonshineError, ValueError):
    """Raised when a truncated series is asked for a coefficient it does not know."""
