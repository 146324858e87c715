"""Certify that every interval (x(1 - 1/Delta), x) with x >= x0 contains a prime.

A certificate evaluates

    F0 - total(B-terms at X0) - psi tail - omega term - Brun-Titchmarsh term

with every subtracted term rounded up and F0 rounded down. A positive Down
value of this margin proves the claim for the given parameters.
"""

import collections
import dataclasses
import enum
import fractions
import functools
import logging

from primecert import config
from primecert import errors
from primecert import numerics
from primecert import sigma_bounds
from primecert import weight
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)

Fraction = fractions.Fraction

#: log X0 must be at least this for the psi - theta estimate to apply.
LOG_X0_FLOOR = 38

#: The published value of omega, kept as a regression ceiling.
OMEGA_CEILING = Fraction('2.05022e-3')

#: How many times `certify` doubles the precision on an UNKNOWN verdict.
MAX_PRECISION_RETRIES = 3


class Verdict(enum.Enum):
    """Outcome of a certificate."""
    PASS = 'PASS'
    FAIL = 'FAIL'
    UNKNOWN = 'UNKNOWN'


_VERDICTS = {
    numerics.Sign.POSITIVE: Verdict.PASS,
    numerics.Sign.NEGATIVE: Verdict.FAIL,
    numerics.Sign.UNKNOWN: Verdict.UNKNOWN,
}


@dataclasses.dataclass(frozen=True)
class CertParams(object):
    """A parameter system for one certificate.

    The mathematical inputs (m, delta, a, T1, sigma0, x0) are exact; the
    derived reals are enclosures at the precision they were derived with.

    Attributes:
        m (int):
            The weight exponent, at least 2.

        delta (Fraction):
            In (0, 1e-4].

        u (Fraction):
            Exactly delta/m.

        a (Fraction):
            In [0, 1/2].

        T1 (Fraction):
            The split height, in (T0, H].

        sigma0 (Fraction):
            A zero-density row.

        x0 (Fraction or ExpOf):
            The threshold from which the claim holds.

        X0 (Enclosure):
            x0 e^-u/(1 + delta(1 - a)).

        log_X0 (Enclosure):
            log X0, at least 38.

        Delta (Enclosure):
            1/(1 - (1 + delta a)/(1 + delta(1 - a)) e^-u).

        Delta_floor (int):
            Delta rounded down, as printed in tables.
    """
    m: int
    delta: Fraction
    u: Fraction
    a: Fraction
    T1: Fraction
    sigma0: Fraction
    x0: object
    X0: numerics.Enclosure
    log_X0: numerics.Enclosure
    Delta: numerics.Enclosure
    Delta_floor: int

    def key(self):
        """The tuple used to order parameter sets deterministically."""
        return (self.m, self.delta, self.a, self.T1, self.sigma0)


def _exact_real(value, name):
    if isinstance(value, (numerics.ExpOf, Fraction)):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return numerics.parse_real(value)
    raise TypeError('%s must be a rational, an ExpOf or a literal, got %r' % (name, value))


def _rational(value, name):
    value = _exact_real(value, name)
    if isinstance(value, numerics.ExpOf):
        raise errors.LiteralError('%s must be rational, got %s' % (name, value))
    return value


def _derived_reals(x0, m, delta, a, arith):
    """(log X0, X0, Delta) as intervals of ``arith``."""
    u = delta / m
    u_value = arith.exact(u)
    spread = 1 + delta * (1 - a)
    log_X0 = numerics.log_of(x0, arith) - u_value - arith.log(spread)
    X0 = arith.exact(x0) * arith.exp(-u_value) / arith.exact(spread)

    # 1 - r e^-u = (1 - r) + r (1 - e^-u), with both parts positive.
    ratio = (1 + delta * a) / spread
    Delta = 1 / (arith.exact(1 - ratio) + arith.exact(ratio) * (1 - arith.exp(-u_value)))
    return log_X0, X0, Delta


def derive_params(x0, m, delta, a, T1, sigma0, constants=zeta_data.DEFAULT_CONSTANTS,
                  precision=config.DEFAULT_PRECISION):
    """Validate a parameter system and derive u, X0 and Delta.

    Arguments:
        x0 (Fraction, ExpOf or str):
            The threshold, e.g. ``Fraction(4 * 10**18)`` or ``'e59'``.

        m (int):
            The weight exponent.

        delta, a, T1, sigma0:
            Rationals or decimal literals such as ``'4.589e-9'``.

        constants (ZetaConstants):
            Provide T0, H and the zero-density rows.

        precision (int):
            Precision of the derived enclosures.

    Returns (CertParams):
        The validated parameters.

    Raises:
        ConstraintError: With code ``M_RANGE``, ``DELTA_RANGE``, ``A_RANGE``,
            ``T1_RANGE``, ``SIGMA0_ROW`` or ``X0_FLOOR``.
    """
    weight.check_m(m)
    delta = weight.check_delta(_rational(delta, 'delta'))
    a = weight.check_a(_rational(a, 'a'))
    T1 = _rational(T1, 'T1')
    sigma0 = _rational(sigma0, 'sigma0')
    x0 = _exact_real(x0, 'x0')

    if not constants.T0 < T1 <= constants.H:
        raise errors.ConstraintError(
            errors.ConstraintCode.T1_RANGE,
            'T1 must lie in (T0, H] = (%s, %s], got %s'
            % (numerics.format_literal(constants.T0), numerics.format_literal(constants.H),
               numerics.format_literal(T1)))
    try:
        constants.density_coeffs(sigma0)
    except errors.DensityRowError as exc:
        raise errors.ConstraintError(errors.ConstraintCode.SIGMA0_ROW, str(exc))

    arith = numerics.arithmetic(numerics.check_precision(precision))
    if not isinstance(x0, numerics.ExpOf) and x0 <= 0:
        raise errors.ConstraintError(errors.ConstraintCode.X0_FLOOR,
                                     'x0 must be positive, got %s' % numerics.format_literal(x0))
    log_X0, X0, Delta = _derived_reals(x0, m, delta, a, arith)
    if arith.lower(log_X0) < LOG_X0_FLOOR:
        raise errors.ConstraintError(
            errors.ConstraintCode.X0_FLOOR,
            'X0 must be at least e^%d, got log X0 = %s' % (LOG_X0_FLOOR, arith.enclose(log_X0)))

    return CertParams(m=m, delta=delta, u=delta / m, a=a, T1=T1, sigma0=sigma0, x0=x0,
                      X0=arith.enclose(X0), log_X0=arith.enclose(log_X0),
                      Delta=arith.enclose(Delta), Delta_floor=arith.floor_lower(Delta))


def _at_precision(params, arith):
    """``params`` with the derived reals re-enclosed by ``arith``."""
    if params.log_X0.precision == arith.precision:
        return params
    log_X0, X0, Delta = _derived_reals(params.x0, params.m, params.delta, params.a, arith)
    return dataclasses.replace(params, X0=arith.enclose(X0), log_X0=arith.enclose(log_X0),
                               Delta=arith.enclose(Delta))


@functools.lru_cache(maxsize=64)
def compute_omega(u_max=Fraction(1, 10 ** 4), delta_max=Fraction(1, 10 ** 4),
                  X_min=numerics.ExpOf(Fraction(LOG_X0_FLOOR)),
                  precision=config.DEFAULT_PRECISION):
    """Bound the psi - theta correction factor omega over the parameter box.

    sqrt(1 + delta) (1.001 e^(u/2) - 0.999
                     + X^(-1/6) (1 + delta)^(-1/6) (e^(u/3) - 1))

    The expression increases with u and decreases with X, so it is evaluated
    with u = ``u_max`` and X = ``X_min``. The two delta factors pull in
    opposite directions, so the enclosure uses ``delta_max`` in the square
    root and 0 in the (1 + delta)^(-1/6) factor.

    Returns (Enclosure):
        Its upper end is the omega used by certificates.
    """
    arith = numerics.arithmetic(precision)
    u = arith.exact(u_max)
    growth = 1 + arith.exact(delta_max)
    log_X = numerics.log_of(X_min, arith)

    smoothing = arith.exact(Fraction('1.001')) * arith.exp(u / 2) - arith.exact(Fraction('0.999'))
    cube_root = arith.exp(-log_X / 6) * (arith.exp(u / 3) - 1)
    omega = arith.sqrt(growth) * (smoothing + cube_root)
    return arith.enclose(omega)


def log_ratio(params, arith=None):
    """log(e^u X0 (1 + delta))/log(X0 (e^u - 1)).

    Raises:
        ConstraintError: ``LOG_RATIO`` if X0 (e^u - 1) is not certainly above 1.
    """
    arith = arith or numerics.arithmetic(params.log_X0.precision)
    log_X0 = arith.exact(params.log_X0)
    u = arith.exact(params.u)
    denominator = log_X0 + arith.log(arith.exp(u) - 1)
    if not arith.is_positive(denominator):
        raise errors.ConstraintError(
            errors.ConstraintCode.LOG_RATIO,
            'X0 (e^u - 1) must exceed 1; log of it is %s' % arith.enclose(denominator))
    numerator = u + log_X0 + arith.log(1 + params.delta)
    return numerator / denominator


def bt_term(params, weights, arith=None):
    """The Brun-Titchmarsh term 2 nu(f, a) (1 + delta)/||f||_1 times `log_ratio`.

    Returns (interval):
        Exactly zero when a = 0.
    """
    arith = arith or numerics.arithmetic(params.log_X0.precision)
    if not weights.nu_a:
        return arith.exact(0)
    share = 2 * weights.nu_a * (1 + params.delta) / weights.norm1
    return arith.exact(share) * log_ratio(params, arith)


def psi_tail_term(params, arith=None):
    """u/(2 (e^u - 1)) X0^-2."""
    arith = arith or numerics.arithmetic(params.log_X0.precision)
    u = arith.exact(params.u)
    return u / (2 * (arith.exp(u) - 1)) * arith.exp(-2 * arith.exact(params.log_X0))


def omega_term(params, omega, arith=None):
    """omega/(e^u - 1) X0^(-1/2), with omega rounded up."""
    arith = arith or numerics.arithmetic(params.log_X0.precision)
    u = arith.exact(params.u)
    omega_up = arith.exact(omega.upper if isinstance(omega, numerics.Enclosure) else omega)
    return omega_up / (arith.exp(u) - 1) * arith.exp(-arith.exact(params.log_X0) / 2)


@dataclasses.dataclass(frozen=True)
class Certificate(object):
    """The evaluated inequality for one parameter system.

    ``verdict`` is PASS only when the Down-rounded ``margin`` is above zero and
    FAIL only when ``margin_upper`` is below zero.
    """
    params: CertParams
    omega: numerics.Enclosure
    breakdown: sigma_bounds.SigmaBreakdown
    bt_term: numerics.Enclosure
    psi_tail_term: numerics.Enclosure
    omega_term: numerics.Enclosure
    positive_term: numerics.DirectedValue
    margin: numerics.DirectedValue
    margin_upper: numerics.DirectedValue
    verdict: Verdict
    precision_used: int
    constants_id: str
    q_variant: str

    @property
    def passed(self):
        return self.verdict is Verdict.PASS


def _evaluate(params, constants, arith, q_variant):
    params = _at_precision(params, arith)
    profile = weight.weight_profile(params.m, params.delta, params.a, arith.precision)
    breakdown = sigma_bounds.B_terms(params, profile, constants, arith, q_variant)
    omega = compute_omega(precision=arith.precision)

    brun_titchmarsh = bt_term(params, profile, arith)
    psi_tail = psi_tail_term(params, arith)
    omega_part = omega_term(params, omega, arith)

    positive = arith.exact(profile.F0.lower)
    margin = positive - arith.exact(breakdown.total_with_X0_powers) - psi_tail \
        - omega_part - brun_titchmarsh

    sign = numerics.certified_sign(arith.down(margin), arith.up(margin))
    return Certificate(
        params=params,
        omega=omega,
        breakdown=breakdown,
        bt_term=arith.enclose(brun_titchmarsh),
        psi_tail_term=arith.enclose(psi_tail),
        omega_term=arith.enclose(omega_part),
        positive_term=profile.F0.lower,
        margin=arith.down(margin),
        margin_upper=arith.up(margin),
        verdict=_VERDICTS[sign],
        precision_used=arith.precision,
        constants_id=constants.identifier,
        q_variant=q_variant,
    )


def certify(params, constants=zeta_data.DEFAULT_CONSTANTS, precision=config.DEFAULT_PRECISION,
            q_variant=config.DEFAULT_Q_VARIANT, max_retries=MAX_PRECISION_RETRIES):
    """Evaluate the prime-interval inequality for ``params``.

    An UNKNOWN sign is retried at doubled precision, at most ``max_retries``
    times.

    Arguments:
        params (CertParams):
            From `derive_params`.

        constants (ZetaConstants):
            The zeta inputs.

        precision (int):
            The starting precision in bits.

        q_variant (str):
            The q(T) definition used by the zero sums.

    Returns (Certificate):
        The certificate from the last precision tried.

    Raises:
        ConstraintError: ``S5_PRECONDITION`` or ``LOG_RATIO``.
    """
    config.check_q_variant(q_variant)
    numerics.check_precision(precision)

    certificate = None
    for attempt in range(max_retries + 1):
        arith = numerics.arithmetic(precision << attempt)
        certificate = _evaluate(params, constants, arith, q_variant)
        if certificate.verdict is not Verdict.UNKNOWN:
            break
        LOGGER.debug('Margin sign unknown at %d bits (%s, %s); retrying',
                     arith.precision, certificate.margin, certificate.margin_upper)
    return certificate


def certify_per_coefficient_set(params, constants=zeta_data.DEFAULT_CONSTANTS,
                                precision=config.DEFAULT_PRECISION,
                                q_variant=config.DEFAULT_Q_VARIANT):
    """Certify ``params`` under each set of R(T) coefficients.

    Returns (collections.OrderedDict):
        Certificates keyed by ``rosser`` and ``trudgian``.
    """
    return collections.OrderedDict(
        (name, certify(params, constants.with_coefficient_set(name), precision, q_variant))
        for name in zeta_data.COEFFICIENT_SETS)
