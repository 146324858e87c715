"""Search parameter systems for the largest certified Delta, and check the
published parameter table.

The search treats the a = 0 margin as a function of (m, delta, T1): for each m
it refines delta, for each delta it refines T1, and the slack left at a = 0 is
then spent on the largest edge width a the Brun-Titchmarsh term allows. Every
reported candidate is confirmed by a full certificate.
"""

import collections
import concurrent.futures
import dataclasses
import enum
import fractions
import logging
import math

import numpy

from primecert import certifier
from primecert import config
from primecert import errors
from primecert import numerics
from primecert import weight
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)

Fraction = fractions.Fraction

#: One published row: the parameters and the Delta they certify from x0 on.
TableRow = collections.namedtuple(
    'TableRow', ['log_x0', 'x0', 'm', 'delta', 'T1', 'sigma0', 'a', 'Delta'])


def _row(log_x0, x0, m, delta, T1, sigma0, a, Delta):
    return TableRow(log_x0, x0, m, Fraction(delta), Fraction(T1), Fraction(sigma0),
                    Fraction(a), Delta)


def _exp(exponent):
    return numerics.ExpOf(Fraction(exponent))


REFERENCE_ROWS = (
    _row('log(4e18)', Fraction(4 * 10 ** 18), 5, '3.580e-8', 272519712, '0.92', '0.2129',
         36082898),
    _row('43', _exp(43), 5, '3.349e-8', 291316980, '0.92', '0.2147', 38753947),
    _row('44', _exp(44), 6, '2.330e-8', 488509984, '0.92', '0.2324', 61162616),
    _row('45', _exp(45), 7, '1.628e-8', 797398875, '0.92', '0.2494', 95381241),
    _row('46', _exp(46), 8, '1.134e-8', 1284120197, '0.92', '0.2651', 148306019),
    _row('47', _exp(47), 9, '8.080e-9', 1996029891, '0.92', '0.2836', 227619375),
    _row('48', _exp(48), 11, '6.000e-9', 3204848430, '0.93', '0.3050', 346582570),
    _row('49', _exp(49), 15, '4.682e-9', 5415123831, '0.93', '0.3275', 518958776),
    _row('50', _exp(50), 20, '3.889e-9', 8466793105, '0.93', '0.3543', 753575355),
    _row('51', _exp(51), 28, '3.625e-9', 12399463961, '0.93', '0.3849', 1037917449),
    _row('52', _exp(52), 39, '3.803e-9', 16139006408, '0.93', '0.4127', 1313524036),
    _row('53', _exp(53), 48, '4.088e-9', 18290358817, '0.93', '0.4301', 1524171138),
    _row('54', _exp(54), 54, '4.311e-9', 19412056863, '0.93', '0.4398', 1670398039),
    _row('55', _exp(55), 56, '4.386e-9', 19757119193, '0.93', '0.4445', 1770251249),
    _row('56', _exp(56), 59, '4.508e-9', 20210075547, '0.93', '0.4481', 1838818070),
    _row('57', _exp(57), 59, '4.506e-9', 20219045843, '0.93', '0.4496', 1886389443),
    _row('58', _exp(58), 61, '4.590e-9', 20495459359, '0.93', '0.4514', 1920768795),
    _row('59', _exp(59), 61, '4.589e-9', 20499925573, '0.93', '0.4522', 1946282821),
    _row('60', _exp(60), 61, '4.588e-9', 20504393735, '0.93', '0.4527', 1966196911),
    _row('150', _exp(150), 64, '4.685e-9', 21029543983, '0.96', '0.4641', 2442159714),
)


def select_rows(labels, rows=REFERENCE_ROWS):
    """The rows whose ``log_x0`` label is in ``labels``, in table order.

    Raises:
        ValueError: A label matches no row.
    """
    wanted = [label.strip() for label in labels if label.strip()]
    known = {row.log_x0 for row in rows}
    unknown = [label for label in wanted if label not in known]
    if unknown:
        raise ValueError('Unknown table rows: %s; rows are %s'
                         % (', '.join(unknown), ', '.join(row.log_x0 for row in rows)))
    return tuple(row for row in rows if row.log_x0 in wanted)


def certify_row(row, constants=zeta_data.DEFAULT_CONSTANTS,
                precision=config.DEFAULT_PRECISION, q_variant=config.DEFAULT_Q_VARIANT):
    """Certify the printed parameters of a table row."""
    params = certifier.derive_params(row.x0, row.m, row.delta, row.a, row.T1, row.sigma0,
                                     constants, precision)
    return certifier.certify(params, constants, precision, q_variant)


@dataclasses.dataclass(frozen=True)
class RowComparison(object):
    """A table row next to its recomputed certificate."""
    row: TableRow
    certificate: certifier.Certificate
    Delta_recomputed: numerics.Enclosure
    Delta_table: int
    relative_gap: Fraction

    @property
    def verdict(self):
        return self.certificate.verdict


def reproduce_table(rows=None, constants=zeta_data.DEFAULT_CONSTANTS,
                    precision=config.DEFAULT_PRECISION, q_variant=config.DEFAULT_Q_VARIANT):
    """Certify each table row with its printed parameters.

    Arguments:
        rows (iterable):
            Optional. `TableRow` tuples; defaults to `REFERENCE_ROWS`.

    Returns (list):
        A `RowComparison` per row. ``relative_gap`` is
        (Delta_recomputed - Delta_table)/Delta_table from the Down end of the
        recomputed Delta.
    """
    comparisons = []
    for row in REFERENCE_ROWS if rows is None else rows:
        certificate = certify_row(row, constants, precision, q_variant)
        Delta = certificate.params.Delta
        gap = (Delta.lower.as_fraction() - row.Delta) / row.Delta
        LOGGER.info('Row %s: %s, Delta %s vs %d', row.log_x0, certificate.verdict.value,
                    Delta.lower.to_text(12), row.Delta)
        comparisons.append(RowComparison(row, certificate, Delta, row.Delta, gap))
    return comparisons


@dataclasses.dataclass(frozen=True)
class GridSpec(object):
    """A geometric grid of ``points`` values from ``low`` to ``high``.

    Values are rounded to ``digits`` significant digits, or to integers when
    ``integer`` is set.
    """
    low: Fraction
    high: Fraction
    points: int
    integer: bool = False
    digits: int = 4

    def __post_init__(self):
        if not 0 < self.low <= self.high:
            raise ValueError('Grid bounds must satisfy 0 < low <= high, got %s and %s'
                             % (self.low, self.high))
        if self.points < 1:
            raise ValueError('A grid needs at least one point')

    def values(self):
        """The grid as ascending exact rationals, duplicates removed."""
        raw = numpy.geomspace(float(self.low), float(self.high), self.points)
        values = []
        for value in raw.tolist():
            if self.integer:
                exact = Fraction(int(value))
            else:
                exact = Fraction('%.*e' % (self.digits - 1, value))
            exact = min(max(exact, self.low), self.high)
            if not values or exact > values[-1]:
                values.append(exact)
        return tuple(values)


DEFAULT_SIGMA0_CHOICES = tuple(Fraction(value) for value in
                               ('0.92', '0.93', '0.94', '0.95', '0.96'))


def _default_delta_grid():
    return GridSpec(Fraction(1, 10 ** 9), Fraction(1, 10 ** 7), 241)


def _default_T1_grid():
    return GridSpec(Fraction(10 ** 8), zeta_data.DEFAULT_CONSTANTS.H, 241, integer=True)


@dataclasses.dataclass(frozen=True)
class SearchSpec(object):
    """What `optimize` searches over.

    Attributes:
        x0 (Fraction or ExpOf):
            The threshold to certify from.

        m_range (tuple):
            Inclusive (low, high) bounds for m.

        delta_grid (GridSpec):
            Candidate delta values, within (0, 1e-4].

        a_step (Fraction):
            Resolution of the edge width a in [0, 1/2].

        T1_grid (GridSpec):
            Candidate T1 values; points outside (T0, H] are skipped.

        sigma0_choices (tuple):
            Zero-density rows to try; each gets an equal share of the budget.

        budget (int):
            Maximum number of certificate evaluations.
    """
    x0: object
    m_range: tuple = (2, 80)
    delta_grid: GridSpec = dataclasses.field(default_factory=_default_delta_grid)
    a_step: Fraction = Fraction(1, 10 ** 4)
    T1_grid: GridSpec = dataclasses.field(default_factory=_default_T1_grid)
    sigma0_choices: tuple = DEFAULT_SIGMA0_CHOICES
    budget: int = 20000
    precision: int = config.DEFAULT_PRECISION
    q_variant: str = config.DEFAULT_Q_VARIANT
    workers: int = None

    def __post_init__(self):
        low, high = self.m_range
        if not 2 <= low <= high:
            raise ValueError('m range must satisfy 2 <= low <= high, got %r' % (self.m_range,))
        if self.delta_grid.high > weight.DELTA_MAX:
            raise ValueError('delta grid must stay within (0, 1e-4]')
        if not 0 < self.a_step <= Fraction(1, 2):
            raise ValueError('a step must lie in (0, 1/2], got %s' % self.a_step)
        if not self.sigma0_choices:
            raise ValueError('sigma0 choices must not be empty')
        if self.budget <= 0:
            raise ValueError('budget must be positive, got %d' % self.budget)
        config.check_q_variant(self.q_variant)

    @classmethod
    def from_key_values(cls, values, x0=None):
        """Build a spec from ``key=value`` pairs.

        Keys are ``x0``, ``m_min``, ``m_max``, ``delta_min``, ``delta_max``,
        ``delta_points``, ``t1_min``, ``t1_max``, ``t1_points``, ``a_step``,
        ``sigma0`` (comma-separated), ``budget``, ``precision`` and
        ``q_variant``. An ``x0`` argument overrides the file.

        Raises:
            ConfigFileError: Unknown key or bad value.
        """
        values = dict(values)
        unknown = set(values) - _SPEC_KEYS
        if unknown:
            raise errors.ConfigFileError('Unknown search keys: %s' % ', '.join(sorted(unknown)))

        try:
            if x0 is None:
                if 'x0' not in values:
                    raise errors.ConfigFileError('The search spec needs x0')
                x0 = numerics.parse_real(values['x0'])

            defaults = cls(x0=x0)
            delta_grid = GridSpec(
                Fraction(values.get('delta_min', defaults.delta_grid.low)),
                Fraction(values.get('delta_max', defaults.delta_grid.high)),
                int(values.get('delta_points', defaults.delta_grid.points)))
            T1_grid = GridSpec(
                Fraction(values.get('t1_min', defaults.T1_grid.low)),
                Fraction(values.get('t1_max', defaults.T1_grid.high)),
                int(values.get('t1_points', defaults.T1_grid.points)), integer=True)
            sigma0 = values.get('sigma0')
            choices = defaults.sigma0_choices if sigma0 is None else tuple(
                Fraction(item) for item in sigma0.split(',') if item.strip())

            return cls(
                x0=x0,
                m_range=(int(values.get('m_min', defaults.m_range[0])),
                         int(values.get('m_max', defaults.m_range[1]))),
                delta_grid=delta_grid,
                a_step=Fraction(values.get('a_step', defaults.a_step)),
                T1_grid=T1_grid,
                sigma0_choices=choices,
                budget=int(values.get('budget', defaults.budget)),
                precision=int(values.get('precision', defaults.precision)),
                q_variant=values.get('q_variant', defaults.q_variant),
            )
        except (ValueError, ZeroDivisionError, errors.LiteralError) as exc:
            raise errors.ConfigFileError('Invalid search spec: %s' % exc)


_SPEC_KEYS = {'x0', 'm_min', 'm_max', 'delta_min', 'delta_max', 'delta_points', 't1_min',
              't1_max', 't1_points', 'a_step', 'sigma0', 'budget', 'precision', 'q_variant'}


class SearchStatus(enum.Enum):
    CERTIFIED = 'CERTIFIED'
    NO_CERTIFICATE = 'NO_CERTIFICATE'


#: One evaluated point of a search.
TracePoint = collections.namedtuple(
    'TracePoint', ['sigma0', 'm', 'delta', 'T1', 'a', 'margin', 'verdict'])


@dataclasses.dataclass(frozen=True)
class SearchResult(object):
    """Outcome of `optimize`.

    ``best`` is a PASS certificate and ``Delta_best`` its Delta, or both are
    ``None`` when ``status`` is NO_CERTIFICATE.
    """
    status: SearchStatus
    best: certifier.Certificate
    Delta_best: numerics.Enclosure
    trace: tuple
    dominated_rows: tuple
    evaluations: int


class _BudgetExhausted(Exception):
    pass


#: Scores order candidates: feasible ones by Delta, the rest by their margin.
_INFEASIBLE = (-1, Fraction(0))

_INVERSE_PHI = (math.sqrt(5) - 1) / 2


def _golden_argmax(score, low, high):
    """Maximize ``score`` over the integers in [low, high].

    Golden-section narrowing assumes a unimodal score; the final neighbor walk
    recovers from local departures. Ties go to the smaller index.
    """
    while high - low > 3:
        left = low + int(round((1 - _INVERSE_PHI) * (high - low)))
        right = low + int(round(_INVERSE_PHI * (high - low)))
        if right <= left:
            right = left + 1
        if score(left) >= score(right):
            high = right
        else:
            low = left

    best = max(range(low, high + 1), key=lambda index: (score(index), -index))
    while True:
        neighbors = [index for index in (best - 1, best + 1) if index in score.domain]
        better = [index for index in neighbors if score(index) > score(best)]
        if not better:
            return best
        best = max(better, key=lambda index: (score(index), -index))


class _Scored(object):
    """Memoized score over an index range."""
    def __init__(self, function, domain):
        self._function = function
        self._values = {}
        self.domain = domain

    def __call__(self, index):
        if index not in self._values:
            self._values[index] = self._function(index)
        return self._values[index]


class _SigmaSearch(object):
    """The search for one sigma0 row; not shared between threads."""

    def __init__(self, spec, sigma0, constants, budget):
        self.spec = spec
        self.sigma0 = sigma0
        self.constants = constants
        self.budget = budget
        self.evaluations = 0
        self.trace = []
        self.deltas = spec.delta_grid.values()
        self.T1s = tuple(T1 for T1 in spec.T1_grid.values()
                         if constants.T0 < T1 <= constants.H)
        if not self.T1s:
            raise ValueError('The T1 grid has no points in (T0, H]')
        self.arith = numerics.arithmetic(spec.precision)
        self._zero_margins = {}
        self._candidates = {}

    def _charge(self):
        if self.evaluations >= self.budget:
            raise _BudgetExhausted()
        self.evaluations += 1

    def _certify(self, m, delta, a, T1):
        self._charge()
        try:
            params = certifier.derive_params(self.spec.x0, m, delta, a, T1, self.sigma0,
                                             self.constants, self.spec.precision)
            certificate = certifier.certify(params, self.constants, self.spec.precision,
                                            self.spec.q_variant, max_retries=0)
        except errors.ConstraintError as exc:
            LOGGER.debug('Skipping m=%d delta=%s T1=%s: %s', m, delta, T1, exc)
            self.trace.append(TracePoint(self.sigma0, m, delta, T1, a, None, exc.code.value))
            return None
        self.trace.append(TracePoint(self.sigma0, m, delta, T1, a,
                                     float(certificate.margin), certificate.verdict.value))
        return certificate

    def zero_margin(self, m, delta_index, T1_index):
        """The a = 0 certificate at grid point (delta, T1)."""
        key = (m, delta_index, T1_index)
        if key not in self._zero_margins:
            self._zero_margins[key] = self._certify(
                m, self.deltas[delta_index], Fraction(0), self.T1s[T1_index])
        return self._zero_margins[key]

    def _largest_a(self, m, certificate):
        """The largest a on the grid whose Brun-Titchmarsh term fits in the slack."""
        slack = certificate.margin.as_fraction()
        params = certificate.params
        try:
            ratio = certifier.log_ratio(params, self.arith)
        except errors.ConstraintError:
            return Fraction(0)
        ratio_up = numerics.mpf_to_fraction(self.arith.upper(ratio))
        threshold = slack * weight.norm1(m) / (2 * (1 + params.delta) * ratio_up)

        step = self.spec.a_step
        low, high = 0, int(Fraction(1, 2) / step)
        while low < high:
            middle = (low + high + 1) // 2
            if weight.nu(m, middle * step) < threshold:
                low = middle
            else:
                high = middle - 1
        return low * step

    def candidate(self, m, delta_index):
        """Best PASS certificate for (m, delta) and its score."""
        key = (m, delta_index)
        if key in self._candidates:
            return self._candidates[key]

        def T1_score(T1_index):
            certificate = self.zero_margin(m, delta_index, T1_index)
            if certificate is None:
                return _INFEASIBLE
            return (0, certificate.margin.as_fraction())

        scored = _Scored(T1_score, range(len(self.T1s)))
        T1_index = _golden_argmax(scored, 0, len(self.T1s) - 1)
        base = self.zero_margin(m, delta_index, T1_index)

        if base is None:
            result = (_INFEASIBLE, None)
        elif not base.passed:
            result = ((0, base.margin.as_fraction()), None)
        else:
            result = ((1, base.params.Delta.lower.as_fraction()), base)
            a = self._largest_a(m, base)
            # The a = 0 estimate of the log ratio is an upper bound, so the
            # first try nearly always passes; step down a few times otherwise.
            for _ in range(3):
                if not a:
                    break
                certificate = self._certify(m, self.deltas[delta_index], a,
                                            self.T1s[T1_index])
                if certificate is not None and certificate.passed:
                    result = ((1, certificate.params.Delta.lower.as_fraction()), certificate)
                    break
                a -= self.spec.a_step

        self._candidates[key] = result
        return result

    def best_for_m(self, m):
        scored = _Scored(lambda index: self.candidate(m, index)[0], range(len(self.deltas)))
        delta_index = _golden_argmax(scored, 0, len(self.deltas) - 1)
        return self.candidate(m, delta_index)

    def run(self):
        """Search m, returning the best PASS certificate or ``None``."""
        low, high = self.spec.m_range
        try:
            scored = _Scored(lambda m: self.best_for_m(m)[0], range(low, high + 1))
            _golden_argmax(scored, low, high)
        except _BudgetExhausted:
            LOGGER.info('sigma0 = %s: budget of %d evaluations exhausted',
                        numerics.format_literal(self.sigma0), self.budget)

        certificates = [certificate for _, certificate in self._candidates.values()
                        if certificate is not None]
        if not certificates:
            return None
        return max(certificates, key=_rank)


def _rank(certificate):
    """Larger Delta first, then the lexicographically smallest parameters."""
    params = certificate.params
    Delta = params.Delta.lower.as_fraction()
    return (Delta, tuple(-value for value in params.key()))


def _dominated_rows(spec, Delta, rows=REFERENCE_ROWS):
    """Rows with x0 at or above the search's whose Delta the search matched."""
    arith = numerics.arithmetic(spec.precision)
    log_x0 = numerics.log_of(spec.x0, arith)
    floor = Delta.lower.as_fraction()
    return tuple(row for row in rows
                 if arith.lower(numerics.log_of(row.x0, arith)) >= arith.upper(log_x0)
                 and row.Delta <= floor)


def optimize(spec, constants=zeta_data.DEFAULT_CONSTANTS):
    """Search for the parameters certifying the largest Delta from ``spec.x0``.

    Each sigma0 choice is searched concurrently on its own share of the
    budget. The reduction is deterministic: the largest Down-rounded Delta
    wins, ties going to the lexicographically smallest (m, delta, a, T1,
    sigma0).

    Returns (SearchResult):
        ``NO_CERTIFICATE`` when nothing passed within the budget.
    """
    share = max(spec.budget // len(spec.sigma0_choices), 1)
    searches = [_SigmaSearch(spec, Fraction(sigma0), constants, share)
                for sigma0 in spec.sigma0_choices]

    with concurrent.futures.ThreadPoolExecutor(max_workers=spec.workers) as executor:
        winners = list(executor.map(lambda search: search.run(), searches))

    trace = tuple(point for search in searches for point in search.trace)
    evaluations = sum(search.evaluations for search in searches)
    winners = [winner for winner in winners if winner is not None]
    if not winners:
        LOGGER.info('No certificate for x0 = %s after %d evaluations', spec.x0, evaluations)
        return SearchResult(SearchStatus.NO_CERTIFICATE, None, None, trace, (), evaluations)

    best = max(winners, key=_rank)
    Delta = best.params.Delta
    LOGGER.info('Best Delta for x0 = %s: %s (m=%d, sigma0=%s) after %d evaluations',
                spec.x0, Delta.lower.to_text(12), best.params.m,
                numerics.format_literal(best.params.sigma0), evaluations)
    return SearchResult(SearchStatus.CERTIFIED, best, Delta, trace,
                        _dominated_rows(spec, Delta), evaluations)
