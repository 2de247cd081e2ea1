"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`FormatError` -> 3,
:class:`DomainError` / :class:`NumericError` -> 4, ``OSError`` -> 2.
"""


class ChaocryptError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ChaocryptError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ShapeMismatchError(DomainError):
    """Two operands that must agree in length or shape do not."""


class DimensionError(DomainError):
    """Image dimensions are incompatible with the requested block size."""


class DegenerateChannelError(DomainError):
    """A channel has zero variance, so a correlation is undefined."""


class KeyRangeError(DomainError):
    """A key parameter is outside its admissible range."""


class NumericError(ChaocryptError, ArithmeticError):
    """A chaotic orbit left the finite floating-point range."""


class FormatError(ChaocryptError, ValueError):
    """A file or byte string does not follow the expected layout."""


class BadMagicError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


class TruncatedError(FormatError):
    pass


class HeaderError(FormatError):
    pass


class MaxvalError(FormatError):
    pass


class MissingFieldError(FormatError):
    pass


class NumberParseError(FormatError):
    pass
