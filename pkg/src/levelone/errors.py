"""Exception hierarchy.

Every error a caller can trigger by violating an operation's precondition
derives from :class:`PreconditionError`; the CLI maps those to exit code 3.
"""


class LevelOneError(Exception):
    pass


class PreconditionError(LevelOneError, ValueError):
    pass


class NegativePowerOfZero(PreconditionError, ZeroDivisionError):
    pass


class DenominatorDivisibleByP(PreconditionError):
    def __init__(self, exponent, p):
        super().__init__(f"coefficient of q^{exponent} has a denominator divisible by {p}")
        self.exponent = exponent
        self.p = p


class BeyondPrecision(PreconditionError, IndexError):
    pass


class PrecisionTooSmall(PreconditionError):
    pass


class InvalidWeight(PreconditionError):
    pass


class OddWeight(InvalidWeight):
    pass


class DimensionNotOne(PreconditionError):
    pass


class EmptyCuspSpace(PreconditionError):
    pass


class InvalidM(PreconditionError):
    pass


class CriterionFails(PreconditionError):
    pass


class BTooSmall(PreconditionError):
    pass


class NotRepresentable(PreconditionError):
    pass


class NoDecomposition(PreconditionError):
    pass


class WeightMismatch(PreconditionError):
    pass


class OrderTooNegative(PreconditionError):
    pass


class NotPrime(PreconditionError):
    pass


class FormSyntaxError(PreconditionError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
