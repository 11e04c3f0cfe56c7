"""Exception hierarchy for spfq.

Every failure mode that callers are expected to handle gets its own class,
so the CLI can map them onto stable exit codes.
"""


class SpfqError(Exception):
    """Base class for all spfq errors."""


# -- field construction and arithmetic ---------------------------------------

class NotPrime(SpfqError):
    pass


class ReducibleModulus(SpfqError):
    pass


class FieldTooLarge(SpfqError):
    pass


class ZeroInverse(SpfqError):
    pass


class EmptySubset(SpfqError):
    pass


# -- sparse matrices and I/O --------------------------------------------------

class ShapeMismatch(SpfqError):
    pass


class FieldMismatch(SpfqError):
    pass


class ValueOutOfRange(SpfqError):
    pass


class ParseError(SpfqError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


# -- parameter derivation ------------------------------------------------------

class NotPrimePower(SpfqError):
    pass


class BadEpsilon(SpfqError):
    pass


class NBelow18(SpfqError):
    pass


class FieldTooSmallForN(SpfqError):
    pass


# -- analysis -------------------------------------------------------------------

class DomainError(SpfqError):
    pass


class PreconditionUnmet(SpfqError):
    pass


class KTooSmall(SpfqError):
    pass


class KTooLarge(SpfqError):
    pass


# -- preconditioning and experiments ---------------------------------------------

class BadShape(SpfqError):
    pass


class WrongPath(SpfqError):
    pass


class RankDeficientInput(SpfqError):
    pass


class GenerationFailed(SpfqError):
    pass


class SpaceTooLarge(SpfqError):
    pass


class TooLarge(SpfqError):
    pass
