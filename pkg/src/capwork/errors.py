"""Exception hierarchy shared by all modules.

Guard-type errors (instance too large, budget exhausted) are kept distinct
from usage errors so the CLI can map them to different exit codes.
"""


class CapworkError(Exception):
    """Base class for all package errors."""


class UsageError(CapworkError):
    """Bad arguments or configuration; CLI exit code 1."""


class GuardError(CapworkError):
    """Instance exceeds a size guard; CLI exit code 2."""


class BudgetExceeded(CapworkError):
    """Node/trial budget exhausted before an exact answer; CLI exit code 2.

    Carries the best incumbent found so far where applicable.
    """

    def __init__(self, message, best=None, nodes=None):
        super().__init__(message)
        self.best = best
        self.nodes = nodes


class NotPrimeError(UsageError):
    pass


class UnsupportedFieldError(UsageError):
    pass


class DivisionByZeroError(CapworkError):
    pass


class NotSquareOrderError(UsageError):
    pass


class FormInconsistentError(CapworkError):
    """Defining form does not produce the expected point count."""


class TypeMismatchError(UsageError):
    pass


class UnsupportedFamilyError(UsageError):
    pass


class SignError(UsageError):
    pass


class BadPartitionError(UsageError):
    pass


class EmptySetError(UsageError):
    pass


class PreconditionSizeError(UsageError):
    pass


class EpsilonRangeError(UsageError):
    pass


class GammaRangeError(UsageError):
    pass


class GuardCubicError(GuardError):
    """Cubic-form triple bound refused below its validity threshold."""


class NonIntegralKError(UsageError):
    pass


class DomainError(UsageError):
    pass


class ParseError(UsageError):
    pass
