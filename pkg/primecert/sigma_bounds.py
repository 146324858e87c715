"""Assemble the bound on the sum over zeta zeros from its B-terms.

The zeros below T0 and between T0 and T1 each have two candidate bounds, one
built from the reciprocal sums (Sigma01, Sigma11) and one from the zero counts
(Sigma02, Sigma12); the smaller is used. The remaining terms cover the zeros
above T1 on the critical line (B2), the zeros above H up to sigma0 (B3) and the
zeros right of sigma0 (B41, B42).

The magnitudes involved reach 10^(+-600) for m near 64. mpmath floats carry an
unbounded binary exponent, so delta^m, T1^m and H^m are formed directly.
"""

import dataclasses
import fractions
import logging

from primecert import config
from primecert import numerics
from primecert import zero_sums
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)


def _arith(arith):
    return arith if arith is not None else numerics.arithmetic(config.DEFAULT_PRECISION)


def _half_prefactor(u, arith):
    """4/(e^(u/2) + 1)."""
    return 4 / (arith.exp(arith.exact(u) / 2) + 1)


def sigma0_bounds(m, delta, u, weights, constants=zeta_data.DEFAULT_CONSTANTS, arith=None):
    """The two candidate bounds for the zeros up to T0.

    Returns (tuple):
        ``(Sigma01, Sigma02)`` as intervals, with
        Sigma01 = 4 F1/((e^(u/2) + 1) delta) S0 and
        Sigma02 = 4 F0/(e^(u/2) + 1) N0.
    """
    # pylint: disable=unused-argument
    arith = _arith(arith)
    prefactor = _half_prefactor(u, arith)
    sigma01 = prefactor * arith.exact(weights.F1) / arith.exact(delta) \
        * arith.exact(constants.S0)
    sigma02 = prefactor * arith.exact(weights.F0) * constants.N0
    return sigma01, sigma02


def sigma1_bounds(m, delta, u, T1, weights, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
                  q_variant=config.DEFAULT_Q_VARIANT):
    """The two candidate bounds for the zeros in (T0, T1].

    Returns (tuple):
        ``(Sigma11, Sigma12)`` as intervals. Sigma11 uses S1(T1), Sigma12 the
        count N(T1) - N0 bounded with the upper end of `zeta_data.N_bounds`.
    """
    # pylint: disable=unused-argument
    arith = _arith(arith)
    prefactor = _half_prefactor(u, arith)
    sigma11 = prefactor * arith.exact(weights.F1) / arith.exact(delta) \
        * zero_sums.S1(T1, constants, arith, q_variant)

    _, count_upper = zeta_data.N_bounds(fractions.Fraction(T1), constants, arith)
    sigma12 = prefactor * arith.exact(weights.F0) * max(count_upper - constants.N0, 0)
    return sigma11, sigma12


def _select(first, second, names, arith):
    label = names[0] if arith.upper(first) <= arith.upper(second) else names[1]
    return arith.minimum(first, second), label


@dataclasses.dataclass(frozen=True)
class SigmaBreakdown(object):
    """Every term of the bound on the zero sum.

    All terms are upper bounds; ``B0_selected`` and ``B1_selected`` name the
    candidate (``Sigma01``/``Sigma02``, ``Sigma11``/``Sigma12``) that was
    smaller.
    """
    Sigma01: numerics.Enclosure
    Sigma02: numerics.Enclosure
    Sigma11: numerics.Enclosure
    Sigma12: numerics.Enclosure
    B0: numerics.Enclosure
    B1: numerics.Enclosure
    B2: numerics.Enclosure
    B3_at_sigma0: numerics.Enclosure
    B3_at_one_minus_sigma0: numerics.Enclosure
    B41: numerics.Enclosure
    B42: numerics.Enclosure
    total_with_X0_powers: numerics.Enclosure
    B0_selected: str
    B1_selected: str

    def terms(self):
        """The B-terms in order, keyed by name."""
        return {name: getattr(self, name) for name in (
            'B0', 'B1', 'B2', 'B3_at_sigma0', 'B3_at_one_minus_sigma0', 'B41', 'B42')}


def B_terms(params, weights, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
            q_variant=config.DEFAULT_Q_VARIANT):
    """Compute every B-term and the total bound at X0.

    total = (B0 + B1 + B2) X0^(-1/2) + B3(sigma0) X0^(sigma0 - 1)
            + B3(1 - sigma0) X0^(-sigma0) + B41 X0^(-1/(R0 log H))
            + B42 X0^(-1 + 1/(R0 log H))

    Arguments:
        params (CertParams):
            The certificate parameters; ``log_X0`` is re-enclosed at the
            precision of ``arith``.

        weights (WeightProfile):
            The weight quantities for (m, delta, a).

    Returns (SigmaBreakdown):
        All terms.

    Raises:
        ConstraintError: ``S5_PRECONDITION`` or ``SIGMA0_ROW``.
    """
    arith = _arith(arith)
    m, delta, u = params.m, params.delta, params.u
    log_X0 = arith.exact(params.log_X0)
    sigma0 = arith.exact(params.sigma0)
    u_value = arith.exact(u)

    sigma01, sigma02 = sigma0_bounds(m, delta, u, weights, constants, arith)
    sigma11, sigma12 = sigma1_bounds(m, delta, u, params.T1, weights, constants, arith,
                                     q_variant)
    B0, B0_selected = _select(sigma01, sigma02, ('Sigma01', 'Sigma02'), arith)
    B1, B1_selected = _select(sigma11, sigma12, ('Sigma11', 'Sigma12'), arith)

    scaled_Fmm = arith.exact(weights.Fmm_upper) / arith.power(arith.exact(delta), m)
    exp_u = arith.exp(u_value)
    exp_u_minus_one = exp_u - 1

    B2 = 2 * scaled_Fmm / (arith.exp(u_value / 2) - 1) \
        * zero_sums.S2(m, params.T1, constants, arith, q_variant)

    S3 = zero_sums.S3(m, constants, arith, q_variant)

    def B3(sigma):
        return 2 * scaled_Fmm * (arith.exp(u_value * sigma) + 1) / exp_u_minus_one * S3

    B3_sigma0 = B3(sigma0)
    B3_other = B3(1 - sigma0)

    density_prefactor = 2 * (exp_u + 1) * scaled_Fmm / exp_u_minus_one
    B41 = density_prefactor * zero_sums.S5(log_X0, m, params.sigma0, constants, arith)
    B42 = density_prefactor * zero_sums.S4(m, params.sigma0, constants, arith)

    region = 1 / (arith.exact(constants.R0) * arith.log(constants.H))
    total = (B0 + B1 + B2) * arith.exp(-log_X0 / 2) \
        + B3_sigma0 * arith.exp((sigma0 - 1) * log_X0) \
        + B3_other * arith.exp(-sigma0 * log_X0) \
        + B41 * arith.exp(-region * log_X0) \
        + B42 * arith.exp((region - 1) * log_X0)

    enclose = arith.enclose
    return SigmaBreakdown(
        Sigma01=enclose(sigma01), Sigma02=enclose(sigma02),
        Sigma11=enclose(sigma11), Sigma12=enclose(sigma12),
        B0=enclose(B0), B1=enclose(B1), B2=enclose(B2),
        B3_at_sigma0=enclose(B3_sigma0), B3_at_one_minus_sigma0=enclose(B3_other),
        B41=enclose(B41), B42=enclose(B42),
        total_with_X0_powers=enclose(total),
        B0_selected=B0_selected, B1_selected=B1_selected,
    )


def min_selection_crossover(T1, weights, constants=zeta_data.DEFAULT_CONSTANTS, arith=None,
                            q_variant=config.DEFAULT_Q_VARIANT):
    """The delta at which Sigma11 and Sigma12 swap order.

    Sigma12 <= Sigma11 exactly when delta <= F1 S1(T1)/(F0 (N(T1) - N0)), with
    the weight integrals held fixed at ``weights``.

    Returns (Enclosure):
        The crossover delta; ``None`` if the count bound is not above N0, in
        which case Sigma12 is zero and always selected.
    """
    arith = _arith(arith)
    _, count_upper = zeta_data.N_bounds(fractions.Fraction(T1), constants, arith)
    excess = count_upper - constants.N0
    if excess <= 0:
        return None
    crossover = arith.exact(weights.F1) * zero_sums.S1(T1, constants, arith, q_variant) \
        / (arith.exact(weights.F0) * excess)
    return arith.enclose(crossover)
