class SixjError(Exception):
    """Base class for every failure raised by the sixj toolkit"""


class BadInput(SixjError, ValueError):
    pass


class Inadmissible(SixjError):
    """A vertex or face triple fails the triangle and parity conditions"""


class CapExceeded(SixjError):
    pass


class FaceViolation(SixjError):
    """Some face of the metric tetrahedron fails the triangle inequality"""


class NotEuclidean(SixjError):
    pass


class FlatUnsupported(NotEuclidean):
    """Neither asymptotic formula covers a flat tetrahedron"""


class StepLeavesEuclideanRegion(NotEuclidean):
    pass


class DegenerateAngle(SixjError):
    pass


class HalfIntegerResult(SixjError):
    pass


class CacheMismatch(SixjError):
    """A cached record no longer matches a fresh computation"""
