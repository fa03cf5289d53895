"""Exception hierarchy shared across the package.

Errors split into two families.  ``UsageError`` subclasses mean the caller
handed over something malformed.  ``BoundedVerdict`` subclasses mean a search
ran out of budget before it could settle a mathematical question; retrying
with a bigger budget may help.
"""


class FoxError(Exception):
    """Base class for every error raised by foxalg."""


class UsageError(FoxError, ValueError):
    """Invalid input or a violated precondition."""


class BoundedVerdict(FoxError):
    """A bounded search gave up without a definite answer."""


class ParseError(UsageError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DivisionByZero(UsageError, ZeroDivisionError):
    pass


class NonInvertibleDenominator(UsageError):
    pass


class FieldMismatch(UsageError):
    pass


class RankMismatch(UsageError):
    pass


class RankExceeded(UsageError):
    pass


class IndexOutOfRange(UsageError, IndexError):
    pass


class ZeroPolynomial(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class NonzeroConstantTerm(UsageError):
    pass


class DepthTooSmall(UsageError):
    pass


class ZeroModule(UsageError):
    pass


class ZeroDivisor(UsageError):
    pass


class NotComonic(UsageError):
    pass


class IsUnit(UsageError):
    pass


class ZeroAugmentation(UsageError):
    pass


class SearchSpaceTooLarge(UsageError):
    pass


class CorpusFormatError(UsageError):
    pass


class NotDivisibleWithinBound(BoundedVerdict):
    def __init__(self, max_len):
        self.max_len = max_len
        super().__init__(f"no right quotient supported on words of length <= {max_len}")


class BudgetExhausted(BoundedVerdict):
    pass


class UnresolvedSimplicity(BoundedVerdict):
    pass


class UnresolvedMembership(BoundedVerdict):
    pass
