"""Exception types raised across the package."""


class Gsp4Error(Exception):
    """Base class for all package errors."""


class NonRealCoordinate(Gsp4Error, ValueError):
    """A quantity expected to be real carried a non-negligible imaginary part."""


class UnclassifiableParams(Gsp4Error, ValueError):
    pass


class DomainViolation(Gsp4Error, ValueError):
    pass


class QuadratureNonConvergence(Gsp4Error, RuntimeError):
    pass


class EnvelopeTooSmall(Gsp4Error, RuntimeError):
    """A density evaluation exceeded the rejection-sampling envelope."""

    def __init__(self, observed: float, envelope: float):
        super().__init__(f"density {observed!r} exceeds envelope {envelope!r}")
        self.observed = observed
        self.envelope = envelope


class MissingEigenvalue(Gsp4Error, ValueError):
    pass


class RegularityViolation(Gsp4Error, ValueError):
    pass


class OrderingViolation(Gsp4Error, ValueError):
    pass


class MissingPrime(Gsp4Error, KeyError):
    pass


class PlancherelMismatch(Gsp4Error, ArithmeticError):
    pass


class SchemaViolation(Gsp4Error, ValueError):
    pass
