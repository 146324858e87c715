"""The weight f_m(t) = (4t(1 - t))^m and the integrals derived from it.

Everything that can be exact is exact: norms, the edge mass nu(f_m, a) and the
order 0 and 1 integrals F_{0,m,delta}, F_{1,m,delta} are rationals. The order m
integral F_{m,m,delta} goes through the shifted Legendre polynomial
P_m(1 - 2t) = f_m^(m)(t) / (4^m m!), whose roots are isolated with certified
rational enclosures.
"""

import dataclasses
import fractions
import functools
import logging
import math

import sympy

from primecert import config
from primecert import errors
from primecert import numerics


LOGGER = logging.getLogger(__name__)

#: Largest delta the parameter system allows.
DELTA_MAX = fractions.Fraction(1, 10 ** 4)

_T = sympy.Symbol('t')


def _to_fraction(value):
    value = sympy.Rational(value)
    return fractions.Fraction(int(value.p), int(value.q))


def _to_rational(value):
    value = fractions.Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def check_m(m, minimum=2):
    if not isinstance(m, int) or isinstance(m, bool) or m < minimum:
        raise errors.ConstraintError(errors.ConstraintCode.M_RANGE,
                                     'm must be an integer >= %d, got %r' % (minimum, m))


def check_delta(delta, allow_zero=False):
    delta = fractions.Fraction(delta)
    if delta > DELTA_MAX or delta < 0 or (delta == 0 and not allow_zero):
        raise errors.ConstraintError(errors.ConstraintCode.DELTA_RANGE,
                                     'delta must lie in (0, 1e-4], got %s' % delta)
    return delta


def check_a(a):
    a = fractions.Fraction(a)
    if not 0 <= a <= fractions.Fraction(1, 2):
        raise errors.ConstraintError(errors.ConstraintCode.A_RANGE,
                                     'a must lie in [0, 1/2], got %s' % a)
    return a


@functools.lru_cache(maxsize=None)
def weight_polynomial(m):
    """f_m(t) = (4t(1 - t))^m as a sympy polynomial over QQ."""
    return sympy.Poly((4 * _T * (1 - _T)) ** m, _T, domain='QQ')


@functools.lru_cache(maxsize=None)
def _weight_antiderivative(m):
    return weight_polynomial(m).integrate()


def norm1(m):
    """||f_m||_1 = 4^m (m!)^2 / (2m + 1)!, exactly."""
    check_m(m, minimum=1)
    return fractions.Fraction(4 ** m * math.factorial(m) ** 2, math.factorial(2 * m + 1))


def norm2_mth_derivative(m):
    """The square ||f_m^(m)||_2^2 = (4^m m!)^2 / (2m + 1), exactly."""
    check_m(m, minimum=1)
    return fractions.Fraction((4 ** m * math.factorial(m)) ** 2, 2 * m + 1)


@functools.lru_cache(maxsize=4096)
def nu(m, a):
    """The edge mass nu(f_m, a), i.e. the integral of f_m over [0, a] and [1 - a, 1].

    Arguments:
        m (int):
            The weight exponent.

        a (fractions.Fraction):
            The edge width, in [0, 1/2].

    Returns (fractions.Fraction):
        2 times the integral of f_m from 0 to ``a``, using the symmetry of f_m
        about 1/2.
    """
    check_m(m, minimum=1)
    a = check_a(a)
    return 2 * _to_fraction(_weight_antiderivative(m).eval(_to_rational(a)))


def mid_mass(m, a):
    """The integral of f_m over [a, 1 - a]."""
    return norm1(m) - nu(m, a)


def shifted_legendre_coefficients(m):
    """Ascending integer coefficients of P_m(1 - 2t).

    P_m(1 - 2t) = sum over k of C(m, k) C(m + k, k) (-t)^k, so P_m(1 - 2t) is 1
    at t = 0. The same sum with an extra factor (-1)^m is P_m(2t - 1).
    """
    check_m(m, minimum=1)
    return tuple((-1) ** k * math.comb(m, k) * math.comb(m + k, k) for k in range(m + 1))


def _sign_at(coefficients, point):
    """The exact sign of the integer polynomial at a rational point."""
    numerator, denominator = point.numerator, point.denominator
    degree = len(coefficients) - 1
    accumulator = coefficients[degree]
    scale = 1
    for k in range(degree - 1, -1, -1):
        scale *= denominator
        accumulator = accumulator * numerator + coefficients[k] * scale
    return (accumulator > 0) - (accumulator < 0)


def _refine(m, coefficients, low, high, width):
    """Bisect an isolating interval of a simple root down to ``width``.

    ``coefficients`` must not vanish at ``low`` or ``high``.
    """
    if low == high:
        return low, high

    sign_low = _sign_at(coefficients, low)
    if sign_low == 0 or sign_low == _sign_at(coefficients, high):
        raise errors.RootIsolationError(m, 'no sign change on [%s, %s]' % (low, high))

    while high - low > width:
        middle = (low + high) / 2
        sign_middle = _sign_at(coefficients, middle)
        if sign_middle == 0:
            return middle, middle
        if sign_middle == sign_low:
            low = middle
        else:
            high = middle
    return low, high


def _primitive(polynomial):
    """The primitive integer polynomial with the roots of ``polynomial``."""
    _, integral = polynomial.clear_denoms(convert=True)
    return integral.primitive()[1]


@functools.lru_cache(maxsize=None)
def _isolating_intervals(m):
    """Isolate the roots of P_m(1 - 2t) in (0, 1).

    sympy returns closed intervals that may share an endpoint, and an exact
    rational root shows up as a degenerate interval whose point can also end a
    neighbouring one. Rational roots are collected and divided out until no
    interval ends on a root, so every remaining interval holds exactly one root
    of the deflated polynomial in its interior.

    Returns (tuple):
        ``(coefficients, roots)``: ascending integer coefficients of the
        deflated polynomial, and the sorted ``(low, high)`` enclosures of all m
        roots, degenerate for the rational ones.
    """
    coefficients = shifted_legendre_coefficients(m)
    polynomial = sympy.Poly(list(reversed(coefficients)), _T, domain='ZZ')
    rational_roots = set()
    intervals = []
    while polynomial.degree() > 0:
        intervals = polynomial.intervals(inf=0, sup=1)
        if any(multiplicity != 1 for _, multiplicity in intervals):
            raise errors.RootIsolationError(m, 'repeated root in (0, 1)')
        found = {point for (low, high), _ in intervals for point in (low, high)
                 if polynomial.eval(point) == 0}
        if not found:
            break
        for point in found:
            polynomial = polynomial.exquo(sympy.Poly(_T - point, _T, domain='QQ'))
        polynomial = _primitive(polynomial)
        rational_roots.update(_to_fraction(point) for point in found)
        intervals = []

    roots = [(root, root) for root in rational_roots]
    roots.extend((_to_fraction(low), _to_fraction(high)) for (low, high), _ in intervals)
    if len(roots) != m:
        raise errors.RootIsolationError(m, 'expected %d simple roots in (0, 1), found %d'
                                        % (m, len(roots)))
    deflated = tuple(int(c) for c in reversed(polynomial.all_coeffs()))
    return deflated, tuple(sorted(roots))


@dataclasses.dataclass(frozen=True)
class ShiftedLegendre(object):
    """P_m(1 - 2t) with certified enclosures of its breakpoints.

    Attributes:
        m (int):
            The degree.

        coefficients (tuple):
            Ascending integer coefficients.

        breakpoints (tuple):
            ``m + 2`` pairs ``(low, high)`` of rationals: ``(0, 0)``, an
            enclosure of each interior root in ascending order, and ``(1, 1)``.

        precision (int):
            The precision the enclosure widths were chosen for; every width is
            at most 2^-(precision - 8).
    """
    m: int
    coefficients: tuple
    breakpoints: tuple
    precision: int

    def knots(self):
        """The midpoints of the breakpoint enclosures; they sum piece lengths to 1."""
        return tuple((low + high) / 2 for low, high in self.breakpoints)

    def slack(self):
        """Total width of the interior root enclosures."""
        return sum(high - low for low, high in self.breakpoints)


@functools.lru_cache(maxsize=None)
def isolate_breakpoints(m, precision=config.DEFAULT_PRECISION):
    """Certify the roots of P_m(1 - 2t) in (0, 1).

    The roots are isolated exactly, each enclosure is bisected with exact sign
    evaluation until its width is at most 2^-(precision - 8), and the sign is
    checked to alternate between consecutive enclosures.

    Raises:
        RootIsolationError: The isolation or the alternation check failed.
    """
    check_m(m, minimum=1)
    numerics.check_precision(precision)
    coefficients = shifted_legendre_coefficients(m)
    width = fractions.Fraction(1, 2 ** (precision - 8))

    deflated, roots = _isolating_intervals(m)
    refined = [_refine(m, deflated, low, high, width) for low, high in roots]
    breakpoints = ((fractions.Fraction(0), fractions.Fraction(0)),) + tuple(refined) \
        + ((fractions.Fraction(1), fractions.Fraction(1)),)

    expected = 1
    for (_, left), (right, _) in zip(breakpoints, breakpoints[1:]):
        if left >= right:
            raise errors.RootIsolationError(m, 'overlapping enclosures at %s' % left)
        if _sign_at(coefficients, (left + right) / 2) != expected:
            raise errors.RootIsolationError(m, 'sign does not alternate near %s' % left)
        expected = -expected

    LOGGER.debug('Isolated %d roots of P_%d(1 - 2t) to width 2^-%d', m, m, precision - 8)
    return ShiftedLegendre(m, coefficients, breakpoints, precision)


@functools.lru_cache(maxsize=4096)
def legendre_Fmm(m, delta, precision=config.DEFAULT_PRECISION):
    """Enclose F_{m,m,delta} by piecewise exact integration.

    f_m^(m) = 4^m m! P_m(1 - 2t), so the integral of (1 + delta t)^(m+1)
    \\|f_m^(m)\\| over [0, 1] is 4^m m! times the sum over sign-constant pieces
    of \\|integral of (1 + delta t)^(m+1) P_m(1 - 2t)\\|. Each piece is an exact
    polynomial antiderivative evaluated at the enclosure midpoints. Moving a
    piece end by at most w changes the piece integral by at most
    (1 + delta)^(m+1) w since \\|P_m\\| <= 1, which accounts for the enclosures.

    Returns (Enclosure):
        The enclosure of F_{m,m,delta}.
    """
    check_m(m, minimum=1)
    delta = check_delta(delta, allow_zero=True)
    legendre = isolate_breakpoints(m, precision)
    # Guard bits for the cancellation in the antiderivative, whose coefficient
    # sum is bounded by P_m(3) < 6^m.
    arith = numerics.arithmetic(precision + 3 * m + 64)

    growth = [arith.exact(math.comb(m + 1, i) * delta ** i) for i in range(m + 2)]
    integrand = [arith.exact(0)] * (len(growth) + m)
    for i, factor in enumerate(growth):
        for k, coefficient in enumerate(legendre.coefficients):
            integrand[i + k] = integrand[i + k] + factor * coefficient
    antiderivative = [0] + [term / (k + 1) for k, term in enumerate(integrand)]

    values = [arith.polyval(antiderivative, knot) for knot in legendre.knots()]
    pieces = arith.exact(0)
    for left, right in zip(values, values[1:]):
        pieces = pieces + arith.magnitude(right - left)

    correction = arith.power(1 + delta, m + 1) * arith.exact(legendre.slack())
    lower = arith.nonnegative(pieces - correction)
    total = arith.span(lower, pieces + correction)

    scale = fractions.Fraction(math.factorial(2 * m + 1), math.factorial(m))
    result = arith.exact(scale) * total
    return numerics.arithmetic(precision).enclose(result)


def legendre_Fmm_upper(m, delta, precision=config.DEFAULT_PRECISION):
    """Up-directed F_{m,m,delta} from the piecewise Legendre integration."""
    return legendre_Fmm(m, delta, precision).upper


@dataclasses.dataclass(frozen=True)
class LambdaBounds(object):
    """The bounds lambda0 <= F_1 <= lambda1 and F_m <= lam."""
    lambda0: fractions.Fraction
    lambda1: fractions.Fraction
    lam: numerics.Enclosure


@functools.lru_cache(maxsize=4096)
def lambda_bounds(m, delta, precision=config.DEFAULT_PRECISION):
    """Closed-form bounds on the order 1 and order m weight integrals.

    Returns (LambdaBounds):
        lambda0 = (2m+1)!/(2^(2m-1) (m!)^2) and lambda1 = (1+delta)^2 lambda0
        exactly, and an enclosure of
        lam = sqrt(((1+delta)^(2m+3) - 1)/(delta (2m+3))) (2m+1)!/(m! sqrt(2m+1)).
    """
    check_m(m)
    delta = check_delta(delta)
    lambda0 = fractions.Fraction(math.factorial(2 * m + 1),
                                 2 ** (2 * m - 1) * math.factorial(m) ** 2)
    lambda1 = (1 + delta) ** 2 * lambda0

    arith = numerics.arithmetic(precision)
    radicand = ((1 + delta) ** (2 * m + 3) - 1) / (delta * (2 * m + 3))
    lam = arith.sqrt(radicand) * math.factorial(2 * m + 1) \
        / (math.factorial(m) * arith.sqrt(2 * m + 1))
    return LambdaBounds(lambda0, lambda1, arith.enclose(lam))


@functools.lru_cache(maxsize=4096)
def _exact_F0(m, delta):
    integrand = sympy.Poly(1 + _to_rational(delta) * _T, _T, domain='QQ') * weight_polynomial(m)
    antiderivative = integrand.integrate()
    return _to_fraction(antiderivative.eval(1)) / norm1(m)


@functools.lru_cache(maxsize=4096)
def _exact_F1(m, delta):
    derivative = weight_polynomial(m).diff(_T)
    growth = sympy.Poly((1 + _to_rational(delta) * _T) ** 2, _T, domain='QQ')
    antiderivative = (growth * derivative).integrate()
    # f_m' has the sign of 1 - 2t.
    half = _to_fraction(antiderivative.eval(sympy.Rational(1, 2)))
    whole = _to_fraction(antiderivative.eval(1))
    return (2 * half - whole) / norm1(m)


def F(k, m, delta, precision=config.DEFAULT_PRECISION):
    """Enclose F_{k,m,delta}, the integral of (1 + delta t)^(1+k) \\|f_m^(k)\\| / ||f_m||_1.

    Arguments:
        k (int):
            The derivative order: 0, 1 or ``m``.

        m (int):
            The weight exponent, at least 2.

        delta (fractions.Fraction):
            In (0, 1e-4].

        precision (int):
            Working precision for the order m integral.

    Returns (Enclosure):
        For k = 0 and 1 the exact rational, enclosed at ``precision``. For
        k = m the piecewise Legendre enclosure with its upper end capped by
        lambda(m, delta).

    Raises:
        UnsupportedOrderError: ``k`` is not 0, 1 or ``m``.
    """
    check_m(m)
    delta = check_delta(delta)
    arith = numerics.arithmetic(precision)

    if k == 0:
        return arith.enclose(arith.exact(_exact_F0(m, delta)))
    if k == 1:
        return arith.enclose(arith.exact(_exact_F1(m, delta)))
    if k == m:
        piecewise = arith.exact(legendre_Fmm(m, delta, precision))
        ceiling = arith.exact(lambda_bounds(m, delta, precision).lam)
        return arith.enclose(arith.span(piecewise, arith.minimum(piecewise, ceiling)))

    raise errors.UnsupportedOrderError('F_{%d,%d,delta} is not supported; use k in '
                                       '{0, 1, m}' % (k, m))


@dataclasses.dataclass(frozen=True)
class WeightProfile(object):
    """Every weight quantity the certificate needs for one (m, delta, a)."""
    m: int
    delta: fractions.Fraction
    a: fractions.Fraction
    norm1: fractions.Fraction
    F0: numerics.Enclosure
    F1: numerics.Enclosure
    Fmm_upper: numerics.DirectedValue
    nu_a: fractions.Fraction
    mid_mass: fractions.Fraction


def weight_profile(m, delta, a, precision=config.DEFAULT_PRECISION):
    """Build the `WeightProfile` for (m, delta, a)."""
    check_m(m)
    delta = check_delta(delta)
    a = check_a(a)
    edge = nu(m, a)
    return WeightProfile(
        m=m,
        delta=delta,
        a=a,
        norm1=norm1(m),
        F0=F(0, m, delta, precision),
        F1=F(1, m, delta, precision),
        Fmm_upper=F(m, m, delta, precision).upper,
        nu_a=edge,
        mid_mass=norm1(m) - edge,
    )
