"""Domain errors raised on violated preconditions.

All of these derive from DomainError so the CLI can map them to exit
code 2 with a structured payload; anything else escaping a command is
an internal bug (exit 1).
"""


class DomainError(ValueError):
    """A caller violated a documented precondition."""


class NonUnitGenerator(DomainError):
    pass


class NotADivisor(DomainError):
    pass


class NotPrimitive(DomainError):
    pass


class NotCoprime(DomainError):
    pass


class NotIrregular(DomainError):
    pass


class NotExactDivisor(DomainError):
    pass


class LevelMismatch(DomainError):
    pass


class BadP(DomainError):
    pass


class LevelNotDivisible(DomainError):
    pass


class PNotDividingM(DomainError):
    pass


class BadGenus(DomainError):
    pass


class GenusTooSmall(DomainError):
    pass


class NotPrime(DomainError):
    pass


class RCongruentZero(DomainError):
    pass


class TruncationTooSmall(DomainError):
    pass


class InconsistentGapCount(DomainError):
    pass


class UnknownCommand(DomainError):
    pass


class BadFlag(DomainError):
    pass


class NonIntegralGenus(RuntimeError):
    """Genus formula returned a non-integer: implementation bug, not bad input."""


class NonzeroDegree(RuntimeError):
    """Divisor of a supposed modular function has nonzero total degree."""
