"""Exact rationals and outward-rounded real arithmetic.

Real quantities are carried as intervals from an mpmath interval context with
its own working precision. Every operation rounds the endpoints outward, so the
lower endpoint of a result is a Down-directed value of the expression and the
upper endpoint an Up-directed one. Rationals are plain `fractions.Fraction`
instances and stay exact until they are fed to an `Arithmetic`.

Usage:

    .. code-block:: python

        arith = numerics.arithmetic(192)
        value = arith.exp(arith.exact('1/3'))
        arith.down(value)   # DirectedValue, never above e^(1/3)
        arith.up(value)     # DirectedValue, never below e^(1/3)
"""

import dataclasses
import decimal
import enum
import fractions
import functools
import logging
import math
import re

import mpmath
from mpmath import ctx_iv
from mpmath import libmp

from primecert import config
from primecert import errors


LOGGER = logging.getLogger(__name__)

#: Exact rational numbers.
BigRational = fractions.Fraction

#: Requests above this many bits are rejected as a precision overflow.
MAX_PRECISION = 1 << 16

_EXP_LITERAL = re.compile(r'^e(?P<exponent>[-+]?(\d+(\.\d*)?|\.\d+))$', re.IGNORECASE)


class Direction(enum.Enum):
    """The side from which a rounded value bounds the exact quantity."""
    UP = 'up'
    DOWN = 'down'


class Sign(enum.Enum):
    """Outcome of `certified_sign`."""
    POSITIVE = 'positive'
    NEGATIVE = 'negative'
    UNKNOWN = 'unknown'


@dataclasses.dataclass(frozen=True)
class ExpOf(object):
    """The real number e^exponent.

    ``exponent`` is usually a `fractions.Fraction`, but anything an
    `Arithmetic` can enclose is accepted.
    """
    exponent: object

    def __str__(self):
        if isinstance(self.exponent, fractions.Fraction):
            return 'e' + format_literal(self.exponent)
        return 'e^(%s)' % (self.exponent,)


def _raw_to_fraction(raw):
    sign, man, exp, _ = raw
    man = int(man)
    if not man:
        if raw == libmp.fzero:
            return fractions.Fraction(0)
        raise errors.NumericsError('Non-finite value %s' % libmp.to_str(raw, 10))

    if exp >= 0:
        value = fractions.Fraction(man << exp)
    else:
        value = fractions.Fraction(man, 1 << -exp)
    return -value if sign else value


def mpf_to_fraction(value):
    """Convert an mpmath float to the exact rational it represents."""
    return _raw_to_fraction(value._mpf_)


def _decimal_exponent(value):
    """Return ``e`` such that 10^e <= value < 10^(e + 1) for a positive rational."""
    exponent = len(str(value.numerator)) - len(str(value.denominator))
    ten = fractions.Fraction(10)
    while ten ** exponent > value:
        exponent -= 1
    while ten ** (exponent + 1) <= value:
        exponent += 1
    return exponent


def format_directed(magnitude, direction, digits=20):
    """Format a value as decimal text rounded in the given direction.

    Re-parsing the text with `parse_directed` gives a value on the same side of
    the exact quantity as ``magnitude``.

    Arguments:
        magnitude (mpmath.mpf):
            The value to format.

        direction (Direction):
            ``UP`` rounds toward +infinity, ``DOWN`` toward -infinity.

        digits (int):
            Significant decimal digits. Default: 20.

    Returns (str):
        Text such as ``1.2345e-3``.
    """
    exact = mpf_to_fraction(magnitude)
    if exact == 0:
        return '0'

    shift = _decimal_exponent(abs(exact)) - digits + 1
    scaled = exact / fractions.Fraction(10) ** shift
    rounded = math.ceil(scaled) if direction is Direction.UP else math.floor(scaled)

    sign = '-' if rounded < 0 else ''
    text = str(abs(rounded))
    exponent = shift + len(text) - 1
    mantissa = text[0] + ('.' + text[1:].rstrip('0') if text[1:].rstrip('0') else '')
    return '%s%se%+d' % (sign, mantissa, exponent)


def parse_directed(text, direction, precision):
    """Parse decimal text into a `DirectedValue` without weakening it.

    The decimal is converted to binary rounding in ``direction`` so a Down
    value stays below the decimal and an Up value above it.
    """
    try:
        exact = fractions.Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise errors.LiteralError('Unparsable directed value %r' % text)

    rounding = libmp.round_ceiling if direction is Direction.UP else libmp.round_floor
    raw = libmp.from_rational(exact.numerator, exact.denominator, precision + 64, rounding)
    return DirectedValue(mpmath.mp.make_mpf(raw), direction, precision)


def format_literal(value):
    """Format an exact rational the way it would be typed, e.g. ``4.589e-9``.

    Rationals without a terminating decimal expansion come out as ``p/q``.
    """
    value = fractions.Fraction(value)
    denominator = value.denominator
    for prime in (2, 5):
        while denominator % prime == 0:
            denominator //= prime
    if denominator != 1:
        return '%d/%d' % (value.numerator, value.denominator)
    if value.denominator == 1 and not str(value.numerator).endswith('000000'):
        return str(value.numerator)

    with decimal.localcontext() as ctx:
        ctx.prec = len(str(value.numerator)) + 4 * len(str(value.denominator))
        text = str((decimal.Decimal(value.numerator) / value.denominator).normalize())
    return text.lower().replace('e+', 'e')


def parse_real(text):
    """Parse a real literal.

    Accepted forms are decimals (``0.93``), scientific notation (``4e18``,
    ``4.589e-9``), ratios (``1/3``) and natural exponentials written ``eN``
    (``e59`` is e^59).

    Returns (fractions.Fraction or ExpOf):
        The exact value.

    Raises:
        LiteralError: The text isn't one of the accepted forms.
    """
    stripped = text.strip()
    match = _EXP_LITERAL.match(stripped)
    if match:
        return ExpOf(fractions.Fraction(match.group('exponent')))

    try:
        return fractions.Fraction(stripped)
    except (ValueError, ZeroDivisionError):
        raise errors.LiteralError('Unparsable real literal %r' % text)


@dataclasses.dataclass(frozen=True)
class DirectedValue(object):
    """One side of an enclosure: a binary float known to bound a real quantity.

    A ``DOWN`` value never exceeds the quantity, an ``UP`` value is never below
    it.
    """
    magnitude: mpmath.mpf
    direction: Direction
    precision: int

    def as_fraction(self):
        return mpf_to_fraction(self.magnitude)

    def to_text(self, digits=20):
        return format_directed(self.magnitude, self.direction, digits)

    def __float__(self):
        return float(self.magnitude)

    def __str__(self):
        return '%s (%s)' % (self.to_text(12), self.direction.value)


@dataclasses.dataclass(frozen=True)
class Enclosure(object):
    """A Down-directed and an Up-directed value bounding the same quantity."""
    lower: DirectedValue
    upper: DirectedValue

    @property
    def precision(self):
        return self.upper.precision

    def __contains__(self, value):
        value = fractions.Fraction(value)
        return self.lower.as_fraction() <= value <= self.upper.as_fraction()

    def __float__(self):
        return float((self.lower.magnitude + self.upper.magnitude) / 2)

    def __str__(self):
        return '[%s, %s]' % (self.lower.to_text(12), self.upper.to_text(12))


def certified_sign(lower, upper=None):
    """Decide the sign of an expression from its directed bounds.

    Arguments:
        lower (DirectedValue):
            The expression evaluated with direction ``DOWN``.

        upper (DirectedValue):
            Optional. The matching ``UP`` evaluation. Without it the result is
            never `Sign.NEGATIVE`.

    Returns (Sign):
        ``POSITIVE`` only if the Down value is > 0, ``NEGATIVE`` only if the Up
        value is < 0, ``UNKNOWN`` otherwise.
    """
    if lower.direction is not Direction.DOWN:
        raise errors.DirectionError('certified_sign needs a Down-directed lower bound')
    if upper is not None and upper.direction is not Direction.UP:
        raise errors.DirectionError('certified_sign needs an Up-directed upper bound')

    if lower.magnitude > 0:
        return Sign.POSITIVE
    if upper is not None and upper.magnitude < 0:
        return Sign.NEGATIVE
    return Sign.UNKNOWN


def check_precision(precision):
    """Raise `PrecisionError` unless the backing contexts can use ``precision``."""
    config.check_precision(precision)
    if precision > MAX_PRECISION:
        raise errors.PrecisionError(
            'Precision overflow: %d bits exceeds the %d bit ceiling' % (precision, MAX_PRECISION))
    return precision


class Arithmetic(object):
    """Outward-rounded interval arithmetic at a fixed precision.

    Instances are never mutated after construction and can be shared between
    threads. Use `arithmetic` to get the shared instance for a precision.

    Arguments:
        precision (int):
            The working precision in bits; at least 64.
    """
    def __init__(self, precision=config.DEFAULT_PRECISION):
        self.precision = check_precision(precision)
        ctx = ctx_iv.MPIntervalContext()
        ctx._mp = mpmath.mp  # pylint: disable=protected-access
        ctx._fp = mpmath.fp  # pylint: disable=protected-access
        ctx._iv = ctx  # pylint: disable=protected-access
        ctx.prec = precision
        self._ctx = ctx

    def __repr__(self):
        return 'Arithmetic(%d)' % self.precision

    def exact(self, value):
        """Enclose ``value`` as tightly as the working precision allows.

        Arguments:
            value:
                An int, `fractions.Fraction`, real literal string, `ExpOf`,
                `DirectedValue`, `Enclosure`, or an interval from any
                `Arithmetic`.

        Returns (interval):
            An interval of this arithmetic's context.
        """
        ctx = self._ctx
        if isinstance(value, ctx.mpf):
            return value
        if hasattr(value, '_mpi_'):
            return ctx.make_mpf(value._mpi_)
        if hasattr(value, '_mpf_'):
            return ctx.make_mpf((value._mpf_, value._mpf_))
        if isinstance(value, Enclosure):
            return ctx.make_mpf((value.lower.magnitude._mpf_, value.upper.magnitude._mpf_))
        if isinstance(value, DirectedValue):
            return ctx.make_mpf((value.magnitude._mpf_, value.magnitude._mpf_))
        if isinstance(value, ExpOf):
            return ctx.exp(self.exact(value.exponent))
        if isinstance(value, str):
            return self.exact(parse_real(value))
        if isinstance(value, bool):
            raise TypeError('Cannot enclose a bool')
        if isinstance(value, int):
            return ctx.mpf(value)
        if isinstance(value, fractions.Fraction):
            if value.denominator == 1:
                return ctx.mpf(value.numerator)
            return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)
        raise TypeError('Cannot enclose %r' % (value,))

    def span(self, low, high):
        """The interval from the lower end of ``low`` to the upper end of ``high``."""
        return self._ctx.make_mpf((self.exact(low)._mpi_[0], self.exact(high)._mpi_[1]))

    @property
    def pi(self):
        return self._ctx.make_mpf(self._ctx.pi._mpi_)

    def exp(self, value):
        return self._ctx.exp(self.exact(value))

    def log(self, value):
        value = self.exact(value)
        if not self.is_positive(value):
            raise errors.DomainError('log of a value not certainly positive: %s'
                                     % self.enclose(value))
        return self._ctx.log(value)

    def sqrt(self, value):
        value = self.exact(value)
        if self.lower(value) < 0:
            raise errors.DomainError('sqrt of a value not certainly nonnegative: %s'
                                     % self.enclose(value))
        return self._ctx.sqrt(value)

    def power(self, base, exponent):
        """``base ** exponent`` for an integer exponent, or e^(exponent log base)."""
        base = self.exact(base)
        if isinstance(exponent, int) and not isinstance(exponent, bool):
            return base ** exponent
        return self.exp(self.exact(exponent) * self.log(base))

    def polyval(self, coefficients, point):
        """Evaluate a polynomial given by ascending coefficients with Horner's rule."""
        point = self.exact(point)
        result = self.exact(0)
        for coefficient in reversed(coefficients):
            result = result * point + self.exact(coefficient)
        return result

    def lower(self, value):
        """The lower endpoint of ``value`` as an mpmath float."""
        return mpmath.mp.make_mpf(self.exact(value)._mpi_[0])

    def upper(self, value):
        """The upper endpoint of ``value`` as an mpmath float."""
        return mpmath.mp.make_mpf(self.exact(value)._mpi_[1])

    def down(self, value):
        return DirectedValue(self.lower(value), Direction.DOWN, self.precision)

    def up(self, value):
        return DirectedValue(self.upper(value), Direction.UP, self.precision)

    def enclose(self, value):
        return Enclosure(self.down(value), self.up(value))

    def is_positive(self, value):
        return self.lower(value) > 0

    def minimum(self, first, second):
        """The interval enclosing min(x, y) for every x in ``first``, y in ``second``."""
        first, second = self.exact(first), self.exact(second)
        low = min(self.lower(first), self.lower(second))
        high = min(self.upper(first), self.upper(second))
        return self._ctx.make_mpf((low._mpf_, high._mpf_))

    def nonnegative(self, value):
        """Clamp an interval to [0, +infinity)."""
        value = self.exact(value)
        zero = mpmath.mpf(0)
        low = max(self.lower(value), zero)
        high = max(self.upper(value), zero)
        return self._ctx.make_mpf((low._mpf_, high._mpf_))

    def magnitude(self, value):
        """The interval enclosing \\|x\\| for every x in ``value``."""
        value = self.exact(value)
        low, high = self.lower(value), self.upper(value)
        if low >= 0:
            bounds = (low, high)
        elif high <= 0:
            bounds = (-high, -low)
        else:
            bounds = (mpmath.mpf(0), max(-low, high))
        return self._ctx.make_mpf((bounds[0]._mpf_, bounds[1]._mpf_))

    def floor_lower(self, value):
        return math.floor(mpf_to_fraction(self.lower(value)))

    def ceil_lower(self, value):
        return math.ceil(mpf_to_fraction(self.lower(value)))

    def floor_upper(self, value):
        return math.floor(mpf_to_fraction(self.upper(value)))


@functools.lru_cache(maxsize=None)
def arithmetic(precision=config.DEFAULT_PRECISION):
    """The shared `Arithmetic` for ``precision``."""
    LOGGER.debug('Creating interval context at %d bits', precision)
    return Arithmetic(precision)


def with_precision(precision, computation):
    """Run ``computation(arith)`` with the arithmetic for ``precision``.

    The result is deterministic for a fixed precision.

    Raises:
        PrecisionError: ``precision`` is below 64 bits or above `MAX_PRECISION`.
    """
    check_precision(precision)
    return computation(arithmetic(precision))


def log_of(value, arith):
    """log(value), using the exponent directly for `ExpOf` values."""
    if isinstance(value, ExpOf):
        return arith.exact(value.exponent)
    return arith.log(value)
