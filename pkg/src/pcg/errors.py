"""Exception hierarchy shared by every pcg module."""


class PCGError(ValueError):
    """Base class for all library errors."""


class NotAUnit(PCGError):
    pass


class OutOfRange(PCGError):
    pass


class NotPrime(PCGError):
    pass


class NotIrreducible(PCGError):
    pass


class ZeroElement(PCGError):
    pass


class ZeroToZero(PCGError):
    pass


class InvalidSpec(PCGError):
    pass


class InvalidPosition(PCGError):
    pass


class IllegalMove(PCGError):
    pass


class PreconditionViolated(PCGError):
    pass


class ZeroInvariant(PCGError):
    pass


class SearchBudgetExceeded(PCGError):
    pass


class WrongRegion(PCGError):
    pass


class UnsupportedLosingSet(PCGError):
    pass


class DomainExhausted(PCGError):
    pass


class SpecMismatch(PCGError):
    pass


class DegenerateOrder(PCGError):
    pass


class MalformedTable(PCGError):
    pass


class TooLarge(PCGError):
    pass
