"""Exception types raised across the package."""


class SCHError(ValueError):
    """Base class for all input/geometry errors raised by sch3d."""


class DegenerateTriangle(SCHError):
    pass


class DegenerateExtremes(SCHError):
    """The estimated extremal points span (almost) no volume."""


class DegenerateInput(SCHError):
    """Fewer than four points, or all points (almost) coplanar."""


class EmptyInput(SCHError):
    pass


class ZeroDirection(SCHError):
    """A point coincides with the sector grid center."""


class InvalidBase(SCHError):
    pass


class InvalidSpec(SCHError):
    pass


class OracleCapExceeded(SCHError):
    pass


class ParseError(SCHError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IoError(SCHError):
    """A point, mesh or stats file could not be read or written."""
