"""Bounds on sums over the zeta zeros above T0.

S1 bounds the sum of 1/gamma for T0 < gamma <= T1, S2 and S3 bound the sums
of gamma^-(m+1) above T1 and H, and S4, S5 bound the zero-density sums off the
critical line. All of them are upper bounds, so only the upper end of each
returned interval is used downstream.
"""

import dataclasses
import fractions
import logging

from primecert import config
from primecert import errors
from primecert import numerics
from primecert import weight
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)

#: Height used by the low-zero comparison constants.
C0_HEIGHT = 10 ** 9


def _arith(arith):
    return arith if arith is not None else numerics.arithmetic(config.DEFAULT_PRECISION)


def q(T, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
      variant=config.DEFAULT_Q_VARIANT):
    """The partial summation correction q(T) next to 1/2pi in the zero sums.

    Arguments:
        T:
            The height, anything an `Arithmetic` can enclose.

        variant (str):
            ``rlog`` for R(T)/(T log(T/2pi)), ``2rt`` for 2R(T)/T.

    Raises:
        DomainError: T/2pi is not above 1.
    """
    arith = _arith(arith)
    config.check_q_variant(variant)
    T = arith.exact(T)
    if not arith.lower(T / (2 * arith.pi)) > 1:
        raise errors.DomainError('q(T) needs T/2pi > 1, got T = %s' % arith.enclose(T))

    error = zeta_data.R(T, constants, arith)
    if variant == '2rt':
        return 2 * error / T
    return error / (T * arith.log(T / (2 * arith.pi)))


def _density_factor(T, constants, arith, variant):
    return 1 / (2 * arith.pi) + q(T, constants, arith, variant)


def _check_T1(T1, constants):
    T1 = fractions.Fraction(T1)
    if not constants.T0 <= T1 <= constants.H:
        raise errors.ConstraintError(
            errors.ConstraintCode.T1_RANGE,
            'T1 must lie in [T0, H] = [%s, %s], got %s'
            % (numerics.format_literal(constants.T0), numerics.format_literal(constants.H),
               numerics.format_literal(T1)))
    return T1


def S1(T1, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
       q_variant=config.DEFAULT_Q_VARIANT):
    """Upper bound on the sum of 1/gamma over T0 < gamma <= T1.

    (1/2pi + q(T0)) log(T1/T0) log(sqrt(T1 T0)/2pi) + 2R(T0)/T0
    """
    arith = _arith(arith)
    T1 = arith.exact(_check_T1(T1, constants))
    T0 = arith.exact(constants.T0)
    two_pi = 2 * arith.pi

    spread = arith.log(T1 / T0) * arith.log(arith.sqrt(T1 * T0) / two_pi)
    tail = 2 * zeta_data.R(T0, constants, arith) / T0
    return _density_factor(T0, constants, arith, q_variant) * arith.nonnegative(spread) + tail


def _A(m, T, arith):
    T = arith.exact(T)
    return (1 + m * arith.log(T / (2 * arith.pi))) / (m ** 2 * arith.power(T, m))


def S2(m, T1, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
       q_variant=config.DEFAULT_Q_VARIANT):
    """Upper bound on the sum of gamma^-(m+1) over T1 < gamma <= H.

    The bracket A(T1) - A(H) is clamped at zero before rounding up.
    """
    weight.check_m(m)
    arith = _arith(arith)
    T1 = arith.exact(_check_T1(T1, constants))
    bracket = arith.nonnegative(_A(m, T1, arith) - _A(m, constants.H, arith))
    tail = 2 * zeta_data.R(T1, constants, arith) / arith.power(T1, m + 1)
    return _density_factor(T1, constants, arith, q_variant) * bracket + tail


def S3(m, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
       q_variant=config.DEFAULT_Q_VARIANT):
    """Upper bound on the sum of gamma^-(m+1) over gamma > H."""
    weight.check_m(m)
    arith = _arith(arith)
    H = arith.exact(constants.H)
    tail = 2 * zeta_data.R(H, constants, arith) / arith.power(H, m + 1)
    return _density_factor(H, constants, arith, q_variant) * _A(m, H, arith) + tail


def _density_row(sigma0, constants):
    try:
        return constants.density_coeffs(sigma0)
    except errors.DensityRowError as exc:
        raise errors.ConstraintError(errors.ConstraintCode.SIGMA0_ROW, str(exc))


def S4(m, sigma0, constants=zeta_data.DEFAULT_CONSTANTS, arith=None):
    """Zero-density sum above H for zeros right of sigma0.

    (c1 (1 + 1/m) + c2 log H/H + (c3 + c2/(m + 1))/H)/H^m, clamped at zero.
    """
    weight.check_m(m)
    arith = _arith(arith)
    row = _density_row(sigma0, constants)
    c1, c2, c3 = (arith.exact(value) for value in (row.c1, row.c2, row.c3))
    H = arith.exact(constants.H)

    bracket = c1 * (1 + arith.exact(fractions.Fraction(1, m))) \
        + c2 * arith.log(H) / H \
        + (c3 + c2 / (m + 1)) / H
    return arith.nonnegative(bracket / arith.power(H, m))


def check_s5_precondition(log_X0, m, constants=zeta_data.DEFAULT_CONSTANTS, arith=None):
    """Raise S5_PRECONDITION unless log X0 < R0 m (log H)^2 certainly holds."""
    arith = _arith(arith)
    log_X0 = arith.exact(log_X0)
    ceiling = arith.exact(constants.R0) * m * arith.log(constants.H) ** 2
    if not arith.upper(log_X0) < arith.lower(ceiling):
        raise errors.ConstraintError(
            errors.ConstraintCode.S5_PRECONDITION,
            'need log X0 < R0 m (log H)^2, got log X0 = %s and R0 m (log H)^2 = %s'
            % (arith.enclose(log_X0), arith.enclose(ceiling)))


def S5(log_X0, m, sigma0, constants=zeta_data.DEFAULT_CONSTANTS, arith=None):
    """Zero-density sum above H weighted by the zero-free region.

    Arguments:
        log_X0:
            log X0, as an interval, rational or `Enclosure`.

        m (int):
            The weight exponent.

        sigma0:
            A zero-density row of ``constants``.

    Raises:
        ConstraintError: ``S5_PRECONDITION`` if log X0 < R0 m (log H)^2 fails,
            ``SIGMA0_ROW`` if ``sigma0`` is not a row.
    """
    weight.check_m(m)
    arith = _arith(arith)
    row = _density_row(sigma0, constants)
    check_s5_precondition(log_X0, m, constants, arith)

    log_X0 = arith.exact(log_X0)
    c1, c2, c3 = (arith.exact(value) for value in (row.c1, row.c2, row.c3))
    H = arith.exact(constants.H)
    R0 = arith.exact(constants.R0)
    log_H_squared = arith.log(H) ** 2

    region = (c1 + c2 / H) * R0 / (2 * log_X0) * log_H_squared \
        / ((m * R0 / log_X0) * log_H_squared - 1)
    bracket = c1 + c2 * arith.log(H) / H + c3 / H + region
    return arith.nonnegative(bracket / arith.power(H, m))


@dataclasses.dataclass(frozen=True)
class SBounds(object):
    """The five zero-sum bounds for one parameter set, and the q(T) used."""
    S1: numerics.Enclosure
    S2: numerics.Enclosure
    S3: numerics.Enclosure
    S4: numerics.Enclosure
    S5: numerics.Enclosure
    q_variant: str


def s_bounds(m, T1, sigma0, log_X0, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
             q_variant=config.DEFAULT_Q_VARIANT):
    """Compute S1 to S5 together."""
    arith = _arith(arith)
    enclose = arith.enclose
    return SBounds(
        S1=enclose(S1(T1, constants, arith, q_variant)),
        S2=enclose(S2(m, T1, constants, arith, q_variant)),
        S3=enclose(S3(m, constants, arith, q_variant)),
        S4=enclose(S4(m, sigma0, constants, arith)),
        S5=enclose(S5(log_X0, m, sigma0, constants, arith)),
        q_variant=q_variant,
    )


@dataclasses.dataclass(frozen=True)
class C0Analysis(object):
    """Constants comparing S1(t) with the zero count P(t) + R(t) for t >= t1.

    S1(t) = w1 L^2 + w2 L + w3 and P(t) + R(t) = v1 t L + v2 t + v3 L
    + v4 log L + v5 with L = log t, and c0 bounds S1(t)/(P(t) + R(t)) from
    below by c0 L/t.
    """
    t1: int
    w1: numerics.Enclosure
    w2: numerics.Enclosure
    w3: numerics.Enclosure
    v1: numerics.Enclosure
    v2: numerics.Enclosure
    v3: numerics.Enclosure
    v4: numerics.Enclosure
    v5: numerics.Enclosure
    c0: numerics.Enclosure


def c0_analysis(constants=zeta_data.DEFAULT_CONSTANTS, t1=C0_HEIGHT, arith=None,
                q_variant=config.DEFAULT_Q_VARIANT):
    """Reproduce the w and v coefficients and the constant c0 at height ``t1``.

    v2 is the actual coefficient of t in P(t) + R(t), -(log 2pi + 1)/2pi.
    c0 leaves out v2/L, which is negative, so the bound it gives holds.
    """
    arith = _arith(arith)
    a1, a2, a3 = (arith.exact(value) for value in constants.coefficients)
    T0 = arith.exact(constants.T0)
    two_pi = 2 * arith.pi
    log_two_pi = arith.log(two_pi)
    log_T0 = arith.log(T0)
    factor = _density_factor(T0, constants, arith, q_variant)

    w1 = factor / 2
    w2 = -log_two_pi * factor
    w3 = factor * (-log_T0 ** 2 / 2 + log_T0 * log_two_pi) \
        + 2 * zeta_data.R(T0, constants, arith) / T0
    v1 = 1 / two_pi
    v2 = -(log_two_pi + 1) / two_pi
    v3, v4 = a1, a2
    v5 = a3 + arith.exact(fractions.Fraction(7, 8))

    t1_value = arith.exact(t1)
    L = arith.log(t1_value)
    c0 = (w1 + w2 / L + w3 / L ** 2) \
        / (v1 + v3 / t1_value + v4 * arith.log(L) / (t1_value * L) + v5 / (t1_value * L))

    enclose = arith.enclose
    result = C0Analysis(t1=t1, w1=enclose(w1), w2=enclose(w2), w3=enclose(w3),
                        v1=enclose(v1), v2=enclose(v2), v3=enclose(v3), v4=enclose(v4),
                        v5=enclose(v5), c0=enclose(c0))
    LOGGER.debug('c0 at t1 = %d: %s', t1, result.c0)
    return result


def s1_count_ratio(t, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
                   q_variant=config.DEFAULT_Q_VARIANT):
    """S1(t)/(P(t) + R(t)), the quantity c0 L/t bounds from below."""
    arith = _arith(arith)
    count = zeta_data.P(t, arith) + zeta_data.R(t, constants, arith)
    return S1(t, constants, arith, q_variant) / count
