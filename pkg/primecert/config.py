"""Configuration sources shared by the library and the command line."""

import collections
import logging
import os

from primecert import errors


LOGGER = logging.getLogger(__name__)

#: Working precision in bits used when nothing else is requested.
DEFAULT_PRECISION = 192

#: The lowest working precision accepted anywhere.
MIN_PRECISION = 64

#: Environment variable overriding the default working precision.
PRECISION_ENV_VAR = 'PRIMECERT_PRECISION'

#: Supported definitions of the q(T) correction in the zero sums.
Q_VARIANTS = ('rlog', '2rt')

DEFAULT_Q_VARIANT = 'rlog'


def load_key_values(path):
    """Read a ``key=value`` file.

    Blank lines and lines starting with ``#`` are ignored. Whitespace around
    keys and values is stripped.

    Arguments:
        path (str):
            The file to read.

    Returns (collections.OrderedDict):
        The values keyed by name, in file order.

    Raises:
        ConfigFileError: A line has no ``=`` or a key is repeated.
    """
    values = collections.OrderedDict()
    with open(path) as fdesc:
        for line_number, line in enumerate(fdesc, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue

            key, sep, value = line.partition('=')
            key = key.strip()
            if not sep or not key:
                raise errors.ConfigFileError('expected key=value, got %r' % line, line_number)
            if key in values:
                raise errors.ConfigFileError('duplicate key %r' % key, line_number)
            values[key] = value.strip()

    LOGGER.debug('Loaded %d keys from %s', len(values), path)
    return values


def check_precision(precision):
    """Raise `PrecisionError` unless ``precision`` is a usable bit count."""
    if not isinstance(precision, int) or isinstance(precision, bool):
        raise errors.PrecisionError('Precision must be an integer, got %r' % (precision,))
    if precision < MIN_PRECISION:
        raise errors.PrecisionError(
            'Precision must be at least %d bits, got %d' % (MIN_PRECISION, precision))
    return precision


def resolve_precision(explicit=None, environ=None):
    """Pick the working precision.

    An explicit value wins, then the ``PRIMECERT_PRECISION`` environment
    variable, then `DEFAULT_PRECISION`.

    Arguments:
        explicit (int):
            Optional. A precision given on the command line or by the caller.

        environ (dict):
            Optional. The environment to read; defaults to ``os.environ``.

    Returns (int):
        The precision in bits.
    """
    if explicit is not None:
        return check_precision(explicit)

    environ = os.environ if environ is None else environ
    raw = environ.get(PRECISION_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_PRECISION

    try:
        value = int(raw)
    except ValueError:
        raise errors.PrecisionError('%s must be an integer, got %r' % (PRECISION_ENV_VAR, raw))
    return check_precision(value)


def check_q_variant(variant):
    """Return ``variant`` if it names a supported q(T) definition."""
    if variant not in Q_VARIANTS:
        raise errors.ConfigFileError(
            'Unknown q variant %r; expected one of %s' % (variant, ', '.join(Q_VARIANTS)))
    return variant
