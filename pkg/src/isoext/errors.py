"""Exception hierarchy shared by every module of the package."""


class IsoextError(Exception):
    """Base class for all errors raised by isoext."""


class DimensionError(IsoextError, ValueError):
    """A vector does not conform to the ambient weights."""


class MalformedPairing(IsoextError, ValueError):
    """Duplicate sources or targets, or otherwise unusable pairs."""


class DuplicatePoint(IsoextError, ValueError):
    """Two points of a set are closer than the dedup tolerance."""


class BaseNotInSet(IsoextError, ValueError):
    """The requested base point is not an element of the set."""


class RadiusTooSmall(IsoextError, ValueError):
    """The ball radius does not enclose the point set."""


class IsometryViolation(IsoextError):
    """The pairing fails to preserve the weighted metric."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentPairing(IsoextError):
    """Source and target difference spans have different ranks."""


class OutsideDomain(IsoextError):
    """A point lies outside the span an operator is defined on."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotAxisAligned(IsoextError):
    """The domain is not spanned by coordinate axis directions."""


class NotOrthonormal(IsoextError):
    """A family expected to be orthonormal is not."""
