"""Specialized errors."""

import enum


class ConstraintCode(enum.Enum):
    """Names of the parameter constraints a certificate can violate."""
    M_RANGE = 'M_RANGE'
    DELTA_RANGE = 'DELTA_RANGE'
    A_RANGE = 'A_RANGE'
    X0_FLOOR = 'X0_FLOOR'
    T1_RANGE = 'T1_RANGE'
    SIGMA0_ROW = 'SIGMA0_ROW'
    S5_PRECONDITION = 'S5_PRECONDITION'
    LOG_RATIO = 'LOG_RATIO'


class Error(Exception):
    """The base class for all errors.

    This exception is not meant to be thrown directly.

    Arguments:
        message (str):
            Optional. The error message for the exception to be thrown. If not
            given, defaults to the first line of the exception class' docstring.
    """
    def __init__(self, message=None):
        if not message:
            message = self.__doc__.splitlines()[0]
        super().__init__(message)


class ConstraintError(Error):
    """The parameters violate a constraint of the parameter system.

    Arguments:
        code (ConstraintCode):
            Which constraint was violated.

        message (str):
            Optional. Details about the offending value.
    """
    def __init__(self, code, message=None):
        super().__init__('%s: %s' % (code.value, message or self.__doc__.splitlines()[0]))
        self.code = code


class NumericsError(Error):
    """Generic base class for arithmetic failures."""


class PrecisionError(NumericsError):
    """Unsupported working precision."""


class DomainError(NumericsError):
    """An argument lies outside the domain of the function being evaluated."""


class DirectionError(NumericsError):
    """A value was rounded in the wrong direction for this use."""


class LiteralError(NumericsError):
    """Couldn't parse a real number literal."""


class RootIsolationError(NumericsError):
    """Couldn't certify the roots of a shifted Legendre polynomial.

    Arguments:
        degree (int):
            The degree of the polynomial whose roots couldn't be isolated.

        message (str):
            Optional. Details of the failure.
    """
    def __init__(self, degree, message=None):
        super().__init__('Root isolation failed for degree %d: %s'
                         % (degree, message or 'no details'))
        self.degree = degree


class UnsupportedOrderError(NumericsError):
    """Only the weight integrals of order 0, 1 and m are supported."""


class ZetaDataError(Error):
    """Generic base class for problems with zeta constants or zero files."""


class ZeroFileError(ZetaDataError):
    """The zero file is malformed.

    Arguments:
        message (str):
            The error message.

        line_number (int):
            Optional. The 1-based line of the file where the problem was found.
    """
    def __init__(self, message=None, line_number=None):
        if line_number is not None:
            message = 'line %d: %s' % (line_number, message)
        super().__init__(message)
        self.line_number = line_number


class ZeroCoverageError(ZetaDataError):
    """The requested height lies above the last zero in the file."""


class ConstantsError(ZetaDataError):
    """The zeta constants are invalid."""


class ConstantsMismatchError(ConstantsError):
    """The zeta constants disagree with the zero file they were checked against."""


class DensityRowError(ZetaDataError):
    """There is no zero-density row for this sigma."""


class RangeTooLargeError(Error):
    """The requested sieve range is too large for a single call."""


class ReportFormatError(Error):
    """Couldn't parse a certificate report."""


class ConfigFileError(Error):
    """A key=value configuration file is malformed.

    Arguments:
        message (str):
            The error message.

        line_number (int):
            Optional. The 1-based line of the file where the problem was found.
    """
    def __init__(self, message=None, line_number=None):
        if line_number is not None:
            message = 'line %d: %s' % (line_number, message)
        super().__init__(message)
        self.line_number = line_number


class LedgerError(Error):
    """The certificate ledger could not be read or written."""
