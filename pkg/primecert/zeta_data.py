"""Numerical inputs about the zeros of the Riemann zeta function.

The built-in `DEFAULT_CONSTANTS` hold the verification height H, the low-height
data T0, N0 = N(T0) and S0 (an upper bound for the sum of 1/gamma up to T0),
the zero-free region constant R0, the coefficients of the zero-counting error
term R(T), and the zero-density rows N(sigma, T) <= c1 T + c2 log T + c3. Any
of them can be overridden from a key=value file, and the low-height data can be
checked against a file of zero ordinates.
"""

import collections
import dataclasses
import fractions
import logging
import math
import os

import numpy

from primecert import config
from primecert import errors
from primecert import numerics


LOGGER = logging.getLogger(__name__)

Fraction = fractions.Fraction

#: One zero-density row, N(sigma, T) <= c1 T + c2 log T + c3.
DensityRow = collections.namedtuple('DensityRow', ['sigma', 'c1', 'c2', 'c3'])

#: Names of the two sets of coefficients (a1, a2, a3) for R(T).
COEFFICIENT_SETS = ('rosser', 'trudgian')

#: Absolute tolerance when re-deriving S0 from a zero file.
S0_TOLERANCE = Fraction(1, 10 ** 9)

_DEFAULT_DENSITY_ROWS = (
    ('0.90', '5.8494', '0.4659', '-1.7905e11'),
    ('0.91', '5.6991', '0.4539', '-1.7444e11'),
    ('0.92', '5.5564', '0.4426', '-1.7007e11'),
    ('0.93', '5.4206', '0.4318', '-1.6592e11'),
    ('0.94', '5.2913', '0.4215', '-1.6196e11'),
    ('0.95', '5.1680', '0.4116', '-1.5819e11'),
    ('0.96', '5.0503', '0.4023', '-1.5458e11'),
    ('0.97', '4.9379', '0.3933', '-1.5114e11'),
    ('0.98', '4.8304', '0.3848', '-1.4785e11'),
    ('0.99', '4.7274', '0.3766', '-1.4470e11'),
)


def _density_row(values):
    return DensityRow(*(Fraction(value) for value in values))


@dataclasses.dataclass(frozen=True)
class ZetaConstants(object):
    """The zeta inputs of a certificate.

    Attributes:
        H (Fraction):
            Height up to which every nontrivial zero is on the critical line.

        T0 (Fraction):
            Height of the low-zero data.

        N0 (int):
            The number of zeros with 0 < gamma <= T0.

        S0 (Fraction):
            Upper bound for the sum of 1/gamma over those zeros.

        R0 (Fraction):
            Zero-free region constant: no zeros with sigma >= 1 - 1/(R0 log t).

        rosser (tuple):
            (a1, a2, a3) of R(T) = a1 log T + a2 log log T + a3.

        trudgian_alternative (tuple):
            The sharper (a1, a2, a3) that can replace ``rosser``.

        density_rows (tuple):
            `DensityRow` tuples, ascending in sigma.

        coefficient_set (str):
            Which of ``rosser`` and ``trudgian`` R(T) uses.

        constants_id (str):
            Where the values came from, e.g. ``default`` or ``file:consts.txt``.
    """
    H: Fraction
    T0: Fraction
    N0: int
    S0: Fraction
    R0: Fraction
    rosser: tuple
    trudgian_alternative: tuple
    density_rows: tuple
    coefficient_set: str = 'rosser'
    constants_id: str = 'default'

    def __post_init__(self):
        problems = []
        if not 2 < self.T0 < self.H:
            problems.append('need 2 < T0 < H')
        if self.N0 <= 0:
            problems.append('N0 must be positive')
        if self.S0 <= 0:
            problems.append('S0 must be positive')
        if self.R0 <= 0:
            problems.append('R0 must be positive')
        if self.coefficient_set not in COEFFICIENT_SETS:
            problems.append('unknown coefficient set %r' % self.coefficient_set)
        if len(self.rosser) != 3 or len(self.trudgian_alternative) != 3:
            problems.append('R(T) needs exactly three coefficients')

        sigmas = [row.sigma for row in self.density_rows]
        if not sigmas or sigmas != sorted(set(sigmas)):
            problems.append('density rows must be strictly ascending in sigma')
        if any(not Fraction(3, 5) < sigma < 1 for sigma in sigmas):
            problems.append('density sigma values must lie in (3/5, 1)')
        if any(row.c1 <= 0 or row.c2 <= 0 for row in self.density_rows):
            problems.append('density c1 and c2 must be positive')

        if problems:
            raise errors.ConstantsError('Invalid zeta constants (%s): %s'
                                        % (self.constants_id, '; '.join(problems)))

    @property
    def coefficients(self):
        """The active (a1, a2, a3)."""
        if self.coefficient_set == 'trudgian':
            return self.trudgian_alternative
        return self.rosser

    @property
    def identifier(self):
        return '%s/%s' % (self.constants_id, self.coefficient_set)

    def with_coefficient_set(self, name):
        """A copy using the ``rosser`` or ``trudgian`` coefficients for R(T)."""
        return dataclasses.replace(self, coefficient_set=name)

    def density_coeffs(self, sigma0):
        """The zero-density row for ``sigma0``; no interpolation between rows.

        Raises:
            DensityRowError: ``sigma0`` doesn't match a row to two decimals.
        """
        try:
            sigma0 = Fraction(sigma0)
        except (TypeError, ValueError):
            raise errors.DensityRowError('sigma0 must be a rational, got %r' % (sigma0,))

        for row in self.density_rows:
            if row.sigma == sigma0:
                return row
        raise errors.DensityRowError(
            'No zero-density row for sigma0 = %s; rows are %s'
            % (numerics.format_literal(sigma0),
               ', '.join(numerics.format_literal(row.sigma) for row in self.density_rows)))


DEFAULT_CONSTANTS = ZetaConstants(
    H=Fraction('3.061e10'),
    T0=Fraction(1132491),
    N0=2001052,
    S0=Fraction('11.637732363'),
    R0=Fraction('5.69693'),
    rosser=(Fraction('0.137'), Fraction('0.443'), Fraction('1.588')),
    trudgian_alternative=(Fraction('0.111'), Fraction('0.275'), Fraction('2.450')),
    density_rows=tuple(_density_row(values) for values in _DEFAULT_DENSITY_ROWS),
)


_SCALAR_KEYS = {'H': Fraction, 'T0': Fraction, 'N0': int, 'S0': Fraction, 'R0': Fraction}


def constants_from_key_values(values, base=DEFAULT_CONSTANTS, constants_id='override'):
    """Apply key=value overrides to a set of constants.

    Recognised keys are ``H``, ``T0``, ``N0``, ``S0``, ``R0``, ``a1``-``a3``
    (the Rosser set), ``trudgian.a1``-``trudgian.a3``, ``coefficients``
    (``rosser`` or ``trudgian``) and ``density.<sigma>.c1`` (also ``c2``,
    ``c3``). A density key for a new sigma needs all three coefficients.

    Raises:
        ConstantsError: Unknown key or unparsable value.
    """
    changes = {'constants_id': constants_id}
    rosser = list(base.rosser)
    trudgian = list(base.trudgian_alternative)
    density = collections.OrderedDict((row.sigma, row._asdict()) for row in base.density_rows)

    for key, raw in values.items():
        try:
            if key in _SCALAR_KEYS:
                changes[key] = _SCALAR_KEYS[key](Fraction(raw))
            elif key in ('a1', 'a2', 'a3'):
                rosser[int(key[1]) - 1] = Fraction(raw)
            elif key in ('trudgian.a1', 'trudgian.a2', 'trudgian.a3'):
                trudgian[int(key[-1]) - 1] = Fraction(raw)
            elif key == 'coefficients':
                changes['coefficient_set'] = raw
            elif key.startswith('density.') and key.rsplit('.', 1)[-1] in ('c1', 'c2', 'c3'):
                sigma_text, name = key[len('density.'):].rsplit('.', 1)
                sigma = Fraction(sigma_text)
                density.setdefault(sigma, {'sigma': sigma})[name] = Fraction(raw)
            else:
                raise errors.ConstantsError('Unknown constants key %r' % key)
        except (ValueError, ZeroDivisionError):
            raise errors.ConstantsError('Bad value for %s: %r' % (key, raw))

    rows = []
    for sigma in sorted(density):
        row = density[sigma]
        if set(row) != set(DensityRow._fields):
            raise errors.ConstantsError('Density row %s needs c1, c2 and c3'
                                        % numerics.format_literal(sigma))
        rows.append(DensityRow(**row))

    changes.update(rosser=tuple(rosser), trudgian_alternative=tuple(trudgian),
                   density_rows=tuple(rows))
    return dataclasses.replace(base, **changes)


def constants_from_file(path, base=DEFAULT_CONSTANTS):
    """Load a key=value constants override file.

    .. seealso:: `constants_from_key_values` for the recognised keys.
    """
    values = config.load_key_values(path)
    return constants_from_key_values(values, base,
                                     constants_id='file:' + os.path.basename(path))


def density_coeffs(sigma0, constants=DEFAULT_CONSTANTS):
    """The (c1, c2, c3) row of ``constants`` for ``sigma0``."""
    row = constants.density_coeffs(sigma0)
    return row.c1, row.c2, row.c3


def _arith(arith):
    return arith if arith is not None else numerics.arithmetic(config.DEFAULT_PRECISION)


def _height(T, arith, minimum=2):
    T = arith.exact(T)
    if arith.lower(T) < minimum:
        raise errors.DomainError('T must be at least %s, got %s' % (minimum, arith.enclose(T)))
    return T


def R(T, constants=DEFAULT_CONSTANTS, arith=None):
    """The zero-counting error term a1 log T + a2 log log T + a3 for T >= 2.

    Returns (interval):
        An enclosure whose upper end is the Up-rounded R(T).
    """
    arith = _arith(arith)
    T = _height(T, arith)
    a1, a2, a3 = constants.coefficients
    log_T = arith.log(T)
    return arith.exact(a1) * log_T + arith.exact(a2) * arith.log(log_T) + arith.exact(a3)


def P(T, arith=None):
    """The main term T/2pi log(T/2pi) - T/2pi + 7/8 of N(T), for T >= 2."""
    arith = _arith(arith)
    T = _height(T, arith)
    scaled = T / (2 * arith.pi)
    return scaled * arith.log(scaled) - scaled + arith.exact(Fraction(7, 8))


def N_bounds(T, constants=DEFAULT_CONSTANTS, arith=None):
    """Integer bounds (ceil(P - R), floor(P + R)) on N(T)."""
    arith = _arith(arith)
    main = P(T, arith)
    error = R(T, constants, arith)
    return arith.ceil_lower(main - error), arith.floor_upper(main + error)


@dataclasses.dataclass(frozen=True)
class ZeroList(object):
    """Ascending zeta zero ordinates read from a file.

    ``ordinates`` is a read-only float64 array; ``max_height`` is the exact
    value of the last line and ``texts`` holds every line as written.
    """
    ordinates: numpy.ndarray
    max_height: Fraction
    source: str = ''
    texts: tuple = ()

    @property
    def count(self):
        return len(self.ordinates)

    def exact(self, index):
        """The ordinate at ``index`` as the rational its line spells."""
        if self.texts:
            return Fraction(self.texts[index])
        return Fraction(float(self.ordinates[index]))

    def count_up_to(self, T):
        """How many ordinates are at most the rational ``T``.

        The float search only places T among its neighbours; the boundary is
        settled on the exact values.
        """
        count = int(numpy.searchsorted(self.ordinates, float(T), side='right'))
        while count and self.exact(count - 1) > T:
            count -= 1
        while count < self.count and self.exact(count) <= T:
            count += 1
        return count


def load_zeros(path, max_count=None):
    """Read a text file with one zero ordinate per line.

    Surrounding whitespace is ignored, as are blank lines and lines starting
    with ``#``.

    Arguments:
        path (str):
            The file to read.

        max_count (int):
            Optional. Stop after this many ordinates.

    Returns (ZeroList):
        The ordinates.

    Raises:
        ZeroFileError: A line can't be parsed, the ordinates don't strictly
            increase, the first is not above 14, or the file has no ordinates.
    """
    values, texts = [], []
    last_text = None
    with open(path) as fdesc:
        for line_number, line in enumerate(fdesc, 1):
            if max_count is not None and len(values) >= max_count:
                break
            text = line.strip()
            if not text or text.startswith('#'):
                continue

            try:
                value = float(text)
            except ValueError:
                raise errors.ZeroFileError('unparsable ordinate %r' % text, line_number)
            if not math.isfinite(value):
                raise errors.ZeroFileError('unparsable ordinate %r' % text, line_number)
            if not values and value <= 14:
                raise errors.ZeroFileError('first ordinate must exceed 14, got %s' % text,
                                           line_number)
            if values and value <= values[-1]:
                raise errors.ZeroFileError('ordinates must strictly increase (%s after %s)'
                                           % (text, last_text), line_number)
            values.append(value)
            texts.append(text)
            last_text = text

    if not values:
        raise errors.ZeroFileError('no ordinates in %s' % path)

    ordinates = numpy.array(values, dtype=numpy.float64)
    ordinates.flags.writeable = False
    LOGGER.info('Loaded %d zeros up to height %s from %s', len(values), last_text, path)
    return ZeroList(ordinates, Fraction(last_text), path, tuple(texts))


def zero_stats(zeros, T, arith=None):
    """Count the ordinates up to T and bound the sum of their reciprocals.

    The reciprocals are summed in double precision with `math.fsum`; each term
    carries at most two roundings and the sum one more, so scaling by
    1 +/- 2^-50 encloses the sum over the file's decimal ordinates.

    Returns (tuple):
        ``(count, inv_sum)`` where ``inv_sum`` is an interval whose upper end
        is the Up-rounded sum.

    Raises:
        ZeroCoverageError: T lies above the file's last ordinate.
    """
    arith = _arith(arith)
    T = Fraction(T)
    if T > zeros.max_height:
        raise errors.ZeroCoverageError('T = %s exceeds the zero file height %s'
                                       % (numerics.format_literal(T), zeros.max_height))

    count = zeros.count_up_to(T)
    if not count:
        return 0, arith.exact(0)

    total = Fraction(math.fsum((1.0 / zeros.ordinates[:count]).tolist()))
    slack = Fraction(1, 2 ** 50)
    return count, arith.span(total * (1 - slack), total * (1 + slack))


def validate_against_zeros(constants, zeros, arith=None):
    """Re-derive N0 and S0 from a zero file that reaches T0.

    Returns (tuple):
        ``(count, inv_sum)`` at T0, or ``None`` if the file stops below T0.

    Raises:
        ConstantsMismatchError: N(T0) differs from N0, or the reciprocal sum
            differs from S0 by more than `S0_TOLERANCE`.
    """
    arith = _arith(arith)
    if zeros.max_height < constants.T0:
        LOGGER.info('Zero file stops at %s, below T0 = %s; skipping validation',
                    zeros.max_height, constants.T0)
        return None

    count, inv_sum = zero_stats(zeros, constants.T0, arith)
    if count != constants.N0:
        raise errors.ConstantsMismatchError('N(T0) is %d in %s but N0 = %d'
                                            % (count, zeros.source, constants.N0))

    low = numerics.mpf_to_fraction(arith.lower(inv_sum))
    high = numerics.mpf_to_fraction(arith.upper(inv_sum))
    if high > constants.S0 + S0_TOLERANCE or low < constants.S0 - S0_TOLERANCE:
        raise errors.ConstantsMismatchError(
            'Sum of 1/gamma up to T0 is %s in %s but S0 = %s'
            % (arith.enclose(inv_sum), zeros.source, numerics.format_literal(constants.S0)))
    return count, inv_sum


def constants_from_zeros(zeros, T0, base=DEFAULT_CONSTANTS, arith=None):
    """Constants with a lowered T0 and N0, S0 recomputed from ``zeros``.

    This lets small zero files exercise the bounds that start at T0.
    """
    arith = _arith(arith)
    count, inv_sum = zero_stats(zeros, T0, arith)
    S0 = numerics.mpf_to_fraction(arith.upper(inv_sum))
    return dataclasses.replace(base, T0=Fraction(T0), N0=count, S0=S0,
                               constants_id='zeros:' + os.path.basename(zeros.source))
