"""Tests for the bounds on sums over zeta zeros."""

import fractions
import math

import pytest

from primecert import errors
from primecert import numerics
from primecert import zero_sums
from primecert import zeta_data


Fraction = fractions.Fraction


def _float(arith, value):
    return float(arith.enclose(value))


def test_q_at_T0(zeta_constants, arithmetic):
    value = zero_sums.q(zeta_constants.T0, zeta_constants, arithmetic)
    assert _float(arithmetic, value) == pytest.approx(3.40e-7, rel=1e-2)


def test_q_decays(zeta_constants, arithmetic):
    assert arithmetic.upper(zero_sums.q(10 ** 15, zeta_constants, arithmetic)) < 1e-12
    assert arithmetic.upper(zero_sums.q(zeta_constants.H, zeta_constants, arithmetic)) < 1e-10


def test_q_variants(zeta_constants, arithmetic):
    rlog = zero_sums.q(10 ** 8, zeta_constants, arithmetic, 'rlog')
    two_rt = zero_sums.q(10 ** 8, zeta_constants, arithmetic, '2rt')
    R = zeta_data.R(10 ** 8, zeta_constants, arithmetic)
    assert _float(arithmetic, two_rt) == pytest.approx(2 * _float(arithmetic, R) / 1e8)
    assert arithmetic.upper(rlog) < arithmetic.lower(two_rt)


def test_q_domain(zeta_constants, arithmetic):
    with pytest.raises(errors.DomainError):
        zero_sums.q(6, zeta_constants, arithmetic)


def test_S1_at_T0_is_the_tail(zeta_constants, arithmetic):
    value = zero_sums.S1(zeta_constants.T0, zeta_constants, arithmetic)
    tail = 2 * zeta_data.R(zeta_constants.T0, zeta_constants, arithmetic) / zeta_constants.T0
    assert _float(arithmetic, value) == pytest.approx(_float(arithmetic, tail), rel=1e-12)


@pytest.mark.parametrize('T1', [272519712, 10 ** 9, 20499925573])
def test_S1_is_finite_and_stable(zeta_constants, T1):
    coarse = numerics.arithmetic(128)
    fine = numerics.arithmetic(256)
    low = zero_sums.S1(T1, zeta_constants, coarse)
    high = zero_sums.S1(T1, zeta_constants, fine)
    assert coarse.lower(low) > 0
    assert coarse.lower(low) <= fine.lower(high) <= fine.upper(high) <= coarse.upper(low)


def test_S1_bounds_the_fixture_sum(zeta_constants, fixture_zeros, arithmetic):
    """With T0 lowered to 20, S1(100) bounds the reciprocal sum over (20, 100]."""
    constants = zeta_data.constants_from_zeros(fixture_zeros, 20, zeta_constants, arithmetic)
    upper = zero_sums.S1(100, constants, arithmetic)
    _, below_100 = zeta_data.zero_stats(fixture_zeros, 100, arithmetic)
    _, below_20 = zeta_data.zero_stats(fixture_zeros, 20, arithmetic)
    assert arithmetic.upper(below_100 - below_20) <= arithmetic.lower(upper)


def test_S1_q_variant_order(zeta_constants, arithmetic):
    rlog = zero_sums.S1(10 ** 9, zeta_constants, arithmetic, 'rlog')
    two_rt = zero_sums.S1(10 ** 9, zeta_constants, arithmetic, '2rt')
    assert arithmetic.upper(rlog) < arithmetic.lower(two_rt)


@pytest.mark.parametrize('T1', [10 ** 6, Fraction('3.1e10')])
def test_T1_out_of_range(zeta_constants, arithmetic, T1):
    with pytest.raises(errors.ConstraintError) as excinfo:
        zero_sums.S1(T1, zeta_constants, arithmetic)
    assert excinfo.value.code is errors.ConstraintCode.T1_RANGE


@pytest.mark.parametrize('m', [5, 61])
def test_S2_at_H_is_the_tail(zeta_constants, arithmetic, m):
    H = zeta_constants.H
    value = zero_sums.S2(m, H, zeta_constants, arithmetic)
    tail = 2 * zeta_data.R(H, zeta_constants, arithmetic) / arithmetic.power(H, m + 1)
    ratio = value / tail
    assert _float(arithmetic, ratio) == pytest.approx(1, rel=1e-9)


def test_S2_coarse_ceiling(zeta_constants, arithmetic):
    m, T1 = 61, Fraction('2.05e10')
    value = zero_sums.S2(m, T1, zeta_constants, arithmetic)
    T1_value = arithmetic.exact(T1)
    factor = 1 / (2 * arithmetic.pi) + zero_sums.q(T1, zeta_constants, arithmetic)
    ceiling = 2 * factor * (1 + m * arithmetic.log(T1_value / (2 * arithmetic.pi))) \
        / (m ** 2 * arithmetic.power(T1_value, m))
    assert arithmetic.lower(value) > 0
    assert arithmetic.upper(value) < arithmetic.lower(ceiling)


def test_S3_is_positive_and_falls_with_m(zeta_constants, arithmetic):
    values = [zero_sums.S3(m, zeta_constants, arithmetic) for m in (5, 6, 7)]
    assert arithmetic.lower(values[0]) > 0
    assert arithmetic.upper(values[1]) < arithmetic.lower(values[0])
    assert arithmetic.upper(values[2]) < arithmetic.lower(values[1])


@pytest.mark.parametrize('m', [5, 61, 1000])
def test_S4_bracket(zeta_constants, arithmetic, m):
    c1, c2, c3 = (float(c) for c in zeta_data.density_coeffs(Fraction('0.92'),
                                                              zeta_constants))
    H = float(zeta_constants.H)
    expected = c1 * (1 + 1 / m) + c2 * math.log(H) / H + (c3 + c2 / (m + 1)) / H

    value = zero_sums.S4(m, Fraction('0.92'), zeta_constants, arithmetic)
    scaled = value * arithmetic.power(zeta_constants.H, m)
    assert _float(arithmetic, scaled) == pytest.approx(expected, rel=1e-9)


def test_S4_missing_row(zeta_constants, arithmetic):
    with pytest.raises(errors.ConstraintError) as excinfo:
        zero_sums.S4(5, Fraction('0.925'), zeta_constants, arithmetic)
    assert excinfo.value.code is errors.ConstraintCode.SIGMA0_ROW


def test_S5_precondition(zeta_constants, arithmetic):
    zero_sums.check_s5_precondition(59, 61, zeta_constants, arithmetic)

    with pytest.raises(errors.ConstraintError) as excinfo:
        zero_sums.S5(10 ** 6, 5, Fraction('0.93'), zeta_constants, arithmetic)
    assert excinfo.value.code is errors.ConstraintCode.S5_PRECONDITION


def test_S5_and_S4_are_positive(zeta_constants, arithmetic):
    m, sigma0 = 61, Fraction('0.93')
    S5 = zero_sums.S5(59, m, sigma0, zeta_constants, arithmetic)
    S4 = zero_sums.S4(m, sigma0, zeta_constants, arithmetic)
    assert arithmetic.lower(S5) > 0
    assert arithmetic.lower(S4) > 0


def test_s_bounds(zeta_constants, arithmetic):
    bounds = zero_sums.s_bounds(61, 20499925573, Fraction('0.93'), 59, zeta_constants,
                                arithmetic, '2rt')
    assert bounds.q_variant == '2rt'
    for name in ('S1', 'S2', 'S3', 'S4', 'S5'):
        assert getattr(bounds, name).lower.as_fraction() >= 0


def test_c0_analysis(zeta_constants, arithmetic):
    analysis = zero_sums.c0_analysis(zeta_constants, arith=arithmetic)
    assert analysis.t1 == 10 ** 9
    assert float(analysis.w1) == pytest.approx(0.0795777, abs=1e-6)
    assert float(analysis.w2) == pytest.approx(-0.292508, abs=1e-5)
    assert float(analysis.w3) == pytest.approx(-11.3861, abs=1e-3)
    assert float(analysis.v2) == pytest.approx(-0.451662, abs=1e-5)
    assert float(analysis.v5) == pytest.approx(2.463, abs=1e-12)
    assert float(analysis.c0) == pytest.approx(0.2447, abs=1e-3)


@pytest.mark.parametrize('t', [10 ** 9, 10 ** 10, 3 * 10 ** 10])
def test_c0_bounds_the_count_ratio(zeta_constants, arithmetic, t):
    """S1(t)/(P(t) + R(t)) >= c0 log t/t from t1 = 1e9 on."""
    analysis = zero_sums.c0_analysis(zeta_constants, arith=arithmetic)
    ratio = zero_sums.s1_count_ratio(t, zeta_constants, arithmetic)
    bound = arithmetic.exact(analysis.c0.upper) * arithmetic.log(t) / t
    assert arithmetic.lower(ratio) >= arithmetic.upper(bound)
