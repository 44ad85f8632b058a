"""Exception classes shared by all modules."""


class GlnqError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(GlnqError, ValueError):
    pass


class Singular(GlnqError, ValueError):
    pass


class BudgetExceeded(GlnqError, RuntimeError):
    pass


class OutOfRange(GlnqError, ValueError):
    pass


class SizeMismatch(GlnqError, ValueError):
    pass


class InvalidType(GlnqError, ValueError):
    pass


class EmptySet(GlnqError, ValueError):
    pass


class MixedDimensions(GlnqError, ValueError):
    pass


class KeyMismatch(GlnqError, ValueError):
    pass


class TableMissing(GlnqError, LookupError):
    pass


class Infeasible(GlnqError, RuntimeError):
    pass


class StrengthExceeded(GlnqError, ValueError):
    pass


class NotADesign(GlnqError, ValueError):
    pass


class FormatError(GlnqError, ValueError):
    pass
