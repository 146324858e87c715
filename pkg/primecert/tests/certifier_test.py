"""Tests for the certificate inequality."""

import fractions
import math
import random

import pytest

from primecert import certifier
from primecert import errors
from primecert import numerics
from primecert import optimizer
from primecert import weight


Fraction = fractions.Fraction


def _row(reference_rows, label):
    return [row for row in reference_rows if row.log_x0 == label][0]


def _params(row, precision, **changes):
    values = dict(x0=row.x0, m=row.m, delta=row.delta, a=row.a, T1=row.T1,
                  sigma0=row.sigma0)
    values.update(changes)
    return certifier.derive_params(precision=precision, **values)


@pytest.fixture(scope='module')
def certificate_59(reference_rows, primecert_precision):
    params = _params(_row(reference_rows, '59'), primecert_precision)
    return certifier.certify(params, precision=primecert_precision)


def test_row_59_passes(certificate_59, reference_rows):
    row = _row(reference_rows, '59')
    assert certificate_59.verdict is certifier.Verdict.PASS
    assert certificate_59.passed
    assert certificate_59.margin.direction is numerics.Direction.DOWN
    assert certificate_59.margin.as_fraction() > 0
    assert certificate_59.margin_upper.as_fraction() >= certificate_59.margin.as_fraction()
    assert certificate_59.constants_id == 'default/rosser'
    assert certificate_59.q_variant == 'rlog'

    Delta = certificate_59.params.Delta
    assert float(Delta) == pytest.approx(row.Delta, rel=1e-3)
    assert certificate_59.params.Delta_floor == math.floor(Delta.lower.as_fraction())


def test_margin_is_the_difference_of_its_terms(certificate_59):
    terms = (certificate_59.breakdown.total_with_X0_powers, certificate_59.psi_tail_term,
             certificate_59.omega_term, certificate_59.bt_term)
    subtracted = sum(term.upper.as_fraction() for term in terms)
    assert certificate_59.margin.as_fraction() <= \
        certificate_59.positive_term.as_fraction() - subtracted


def test_derive_params(reference_rows, primecert_precision):
    params = certifier.derive_params('e59', 61, '4.589e-9', '0.4522', '20499925573', '0.93',
                                     precision=primecert_precision)
    assert params.x0 == numerics.ExpOf(Fraction(59))
    assert params.delta == Fraction('4.589e-9')
    assert params.u == params.delta / 61
    assert params.key() == (61, Fraction('4.589e-9'), Fraction('0.4522'),
                            Fraction(20499925573), Fraction('0.93'))
    assert params.log_X0.upper.as_fraction() < 59
    assert params.log_X0.lower.as_fraction() > Fraction('58.99999')
    assert params == _params(_row(reference_rows, '59'), primecert_precision)


@pytest.mark.parametrize('changes,code', [
    ({'delta': 0}, errors.ConstraintCode.DELTA_RANGE),
    ({'delta': '2e-4'}, errors.ConstraintCode.DELTA_RANGE),
    ({'m': 1}, errors.ConstraintCode.M_RANGE),
    ({'a': '0.6'}, errors.ConstraintCode.A_RANGE),
    ({'T1': 1132491}, errors.ConstraintCode.T1_RANGE),
    ({'T1': '4e10'}, errors.ConstraintCode.T1_RANGE),
    ({'sigma0': '0.925'}, errors.ConstraintCode.SIGMA0_ROW),
    ({'x0': Fraction(10 ** 10)}, errors.ConstraintCode.X0_FLOOR),
    ({'x0': -5}, errors.ConstraintCode.X0_FLOOR),
    ({'x0': 'e37'}, errors.ConstraintCode.X0_FLOOR),
])
def test_derive_params_constraints(reference_rows, changes, code):
    with pytest.raises(errors.ConstraintError) as excinfo:
        _params(_row(reference_rows, '59'), 128, **changes)
    assert excinfo.value.code is code


def test_derive_params_rejects_floats(reference_rows):
    with pytest.raises(TypeError):
        _params(_row(reference_rows, '59'), 128, x0=1e20)
    with pytest.raises(errors.LiteralError):
        _params(_row(reference_rows, '59'), 128, delta='e-20')


def test_omega():
    omega = certifier.compute_omega()
    assert omega.upper.as_fraction() <= certifier.OMEGA_CEILING
    assert Fraction('2.0501e-3') < omega.lower.as_fraction()
    assert certifier.compute_omega() is omega


def test_omega_grows_with_u():
    small = certifier.compute_omega(u_max=Fraction(1, 10 ** 6))
    assert small.upper.as_fraction() < certifier.compute_omega().lower.as_fraction()


def test_bt_term_vanishes_at_a_zero(reference_rows, primecert_precision):
    row = _row(reference_rows, 'log(4e18)')
    params = _params(row, primecert_precision, a=0)
    profile = weight.weight_profile(row.m, row.delta, 0, primecert_precision)
    arith = numerics.arithmetic(primecert_precision)
    assert arith.enclose(certifier.bt_term(params, profile, arith)).upper.as_fraction() == 0


def test_log_ratio_needs_X0_e_u_above_one(primecert_precision):
    params = certifier.derive_params('e39', 2, '4e-18', '0.1', 10 ** 9, '0.93',
                                     precision=primecert_precision)
    with pytest.raises(errors.ConstraintError) as excinfo:
        certifier.log_ratio(params)
    assert excinfo.value.code is errors.ConstraintCode.LOG_RATIO


def test_psi_tail_term_is_negligible(certificate_59):
    assert 0 < certificate_59.psi_tail_term.upper.as_fraction() < Fraction(1, 10 ** 40)


def test_wide_edge_fails(reference_rows, primecert_precision):
    """At a = 0.49 the Brun-Titchmarsh term alone exceeds F0."""
    params = _params(_row(reference_rows, '59'), primecert_precision, a='0.49')
    certificate = certifier.certify(params, precision=primecert_precision)
    assert certificate.verdict is certifier.Verdict.FAIL
    assert certificate.margin_upper.as_fraction() < 0


def test_unknown_retries_at_doubled_precision(reference_rows, mocker):
    params = _params(_row(reference_rows, 'log(4e18)'), 128)
    sign = mocker.patch.object(certifier.numerics, 'certified_sign',
                               side_effect=[numerics.Sign.UNKNOWN, numerics.Sign.POSITIVE])

    certificate = certifier.certify(params, precision=128)
    assert sign.call_count == 2
    assert certificate.verdict is certifier.Verdict.PASS
    assert certificate.precision_used == 256
    assert certificate.params.log_X0.precision == 256


def test_unknown_gives_up_after_the_retries(reference_rows, mocker):
    params = _params(_row(reference_rows, 'log(4e18)'), 128)
    sign = mocker.patch.object(certifier.numerics, 'certified_sign',
                               return_value=numerics.Sign.UNKNOWN)

    certificate = certifier.certify(params, precision=128, max_retries=1)
    assert sign.call_count == 2
    assert certificate.verdict is certifier.Verdict.UNKNOWN
    assert certificate.precision_used == 256


def test_certify_rejects_unknown_q_variant(reference_rows):
    params = _params(_row(reference_rows, 'log(4e18)'), 128)
    with pytest.raises(errors.ConfigFileError):
        certifier.certify(params, q_variant='sqrt')


def test_certify_per_coefficient_set(reference_rows, primecert_precision):
    params = _params(_row(reference_rows, 'log(4e18)'), primecert_precision)
    certificates = certifier.certify_per_coefficient_set(params, precision=primecert_precision)

    assert list(certificates) == ['rosser', 'trudgian']
    assert certificates['rosser'].constants_id == 'default/rosser'
    assert certificates['trudgian'].constants_id == 'default/trudgian'
    assert certificates['rosser'].margin != certificates['trudgian'].margin


@pytest.fixture(scope='module')
def table_certificates(reference_rows, primecert_precision):
    """Every table row certified with the default q(T)."""
    return {row.log_x0: optimizer.certify_row(row, precision=primecert_precision)
            for row in reference_rows}


def _shifted_x0(x0, log_factor):
    """x0 scaled by e^log_factor, kept exact."""
    if isinstance(x0, numerics.ExpOf):
        return numerics.ExpOf(x0.exponent + log_factor)
    return x0 * math.ceil(math.exp(log_factor))


def test_margin_grows_with_X0(reference_rows, certificate_59, primecert_precision):
    """e^0.7 > 2, so X0 at least doubles."""
    row = _row(reference_rows, '59')
    doubled = certifier.certify(
        _params(row, primecert_precision, x0=_shifted_x0(row.x0, Fraction(7, 10))),
        precision=primecert_precision)
    assert doubled.margin.as_fraction() > certificate_59.margin.as_fraction()


def test_margin_grows_with_X0_on_sampled_points(reference_rows, primecert_precision):
    rng = random.Random(59)
    for _ in range(50):
        row = rng.choice(reference_rows)
        changes = dict(
            delta=row.delta * Fraction(rng.randint(50, 100), 100),
            a=Fraction(rng.randint(2000, 4500), 10 ** 4),
            T1=min(row.T1 * Fraction(rng.randint(50, 150), 100), Fraction('3.061e10')),
        )
        log_factor = Fraction(rng.randint(7, 30), 10)

        base = certifier.certify(_params(row, primecert_precision, **changes),
                                 precision=primecert_precision, max_retries=0)
        larger = certifier.certify(
            _params(row, primecert_precision, x0=_shifted_x0(row.x0, log_factor), **changes),
            precision=primecert_precision, max_retries=0)

        point = (row.log_x0, str(changes['delta']), str(changes['a']), str(log_factor))
        assert larger.margin.as_fraction() >= base.margin.as_fraction(), point
        assert larger.margin_upper.as_fraction() >= base.margin_upper.as_fraction(), point


def test_q_variant_barely_moves_the_margin(reference_rows, table_certificates,
                                           primecert_precision):
    """Only q(T0), q(T1) and q(H) change, each by a few units in 1e-6."""
    for row in reference_rows:
        rlog = table_certificates[row.log_x0]
        other = optimizer.certify_row(row, precision=primecert_precision, q_variant='2rt')

        change = abs(other.margin.as_fraction() - rlog.margin.as_fraction()) \
            / rlog.positive_term.as_fraction()
        assert other.verdict is rlog.verdict, row.log_x0
        # Sigma11 carries S1(T1), whose q(T0) term moves by ~5e-5 relative.
        uses_sigma11 = 'Sigma11' in (rlog.breakdown.B1_selected, other.breakdown.B1_selected)
        assert change < (Fraction(1, 10 ** 4) if uses_sigma11 else Fraction(1, 10 ** 6)), \
            row.log_x0


def test_doubled_precision_keeps_the_verdict(reference_rows, table_certificates,
                                             primecert_precision):
    for row in reference_rows:
        base = table_certificates[row.log_x0]
        finer = optimizer.certify_row(row, precision=2 * primecert_precision)

        assert base.verdict is certifier.Verdict.PASS, row.log_x0
        assert finer.verdict is certifier.Verdict.PASS, row.log_x0
        # Both enclose the same margin.
        assert finer.margin.as_fraction() <= base.margin_upper.as_fraction()
        assert base.margin.as_fraction() <= finer.margin_upper.as_fraction()
