"""Exception types raised by funkvoronoi.

All of them derive from :class:`FunkError`, which is a ``ValueError`` so that
callers validating user input can catch a single familiar type.
"""


class FunkError(ValueError):
    """Base class for every error raised by this package."""


class NotInterior(FunkError):
    """A point that must lie strictly inside the cone (or region) does not."""


class GeneralPositionViolation(FunkError):
    """Input sits exactly on a degenerate configuration we refuse to guess."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class EmptySiteSet(FunkError):
    pass


class WrongSideOfSection(FunkError):
    pass


class DominatedPair(FunkError):
    pass


class DegenerateOrder(FunkError):
    pass


class DegenerateTriple(FunkError):
    pass


class TraceStall(FunkError):
    pass


class OnSpoke(GeneralPositionViolation):
    pass


class FilteredOut(FunkError):
    pass


class WrongExtremeSite(FunkError):
    pass


class DegenerateTangency(GeneralPositionViolation):
    pass


class UnsupportedDimension(FunkError):
    pass
