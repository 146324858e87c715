"""Tests for the directed-rounding arithmetic."""

import fractions

import mpmath
import pytest

from primecert import errors
from primecert import numerics
from primecert import weight


Fraction = fractions.Fraction


def _directed(value, direction):
    return numerics.DirectedValue(mpmath.mpf(value), direction, 64)


@pytest.mark.parametrize('lower,upper,expected', [
    ('0.12', None, numerics.Sign.POSITIVE),
    ('0.12', '0.5', numerics.Sign.POSITIVE),
    ('-0.2', '-0.1', numerics.Sign.NEGATIVE),
    ('-1e-30', '1e-30', numerics.Sign.UNKNOWN),
    ('0', '0', numerics.Sign.UNKNOWN),
    ('-0.2', None, numerics.Sign.UNKNOWN),
])
def test_certified_sign(lower, upper, expected):
    lower = _directed(lower, numerics.Direction.DOWN)
    if upper is not None:
        upper = _directed(upper, numerics.Direction.UP)
    assert numerics.certified_sign(lower, upper) is expected


def test_certified_sign_rejects_wrong_directions():
    up = _directed('1', numerics.Direction.UP)
    down = _directed('1', numerics.Direction.DOWN)
    with pytest.raises(errors.DirectionError):
        numerics.certified_sign(up)
    with pytest.raises(errors.DirectionError):
        numerics.certified_sign(down, down)


@pytest.mark.parametrize('precision', [0, 32, 63, numerics.MAX_PRECISION + 1])
def test_with_precision_rejects_bad_precision(precision):
    with pytest.raises(errors.PrecisionError):
        numerics.with_precision(precision, lambda arith: arith.exact(1))


def test_with_precision_is_deterministic():
    def compute(arith):
        return arith.enclose(arith.exp(arith.exact('1/3')))

    assert numerics.with_precision(128, compute) == numerics.with_precision(128, compute)


@pytest.mark.parametrize('expression', [
    lambda arith: arith.exp(arith.exact('1/3')),
    lambda arith: arith.log(arith.exact(7)),
    lambda arith: arith.sqrt(2) * arith.pi,
    lambda arith: arith.power(arith.exact('1.0000001'), 61),
])
@pytest.mark.parametrize('precision', [64, 192])
def test_doubling_precision_narrows_enclosure(expression, precision):
    coarse = numerics.arithmetic(precision)
    fine = numerics.arithmetic(2 * precision)
    rough = expression(coarse)
    sharp = expression(fine)

    assert coarse.lower(rough) <= fine.lower(sharp)
    assert fine.lower(sharp) <= fine.upper(sharp)
    assert fine.upper(sharp) <= coarse.upper(rough)


def test_rationals_stay_exact_across_precisions():
    """Weight norms are exact no matter the precision their reals are taken at."""
    norm = weight.norm1(5)
    assert norm == Fraction(256, 693)

    low = numerics.arithmetic(64).enclose(norm)
    high = numerics.arithmetic(128).enclose(norm)
    assert norm in low
    assert norm in high
    assert low != high


def test_directions_bound_the_exact_value():
    arith = numerics.arithmetic(64)
    third = arith.exact(Fraction(1, 3))
    assert arith.down(third).as_fraction() < Fraction(1, 3) < arith.up(third).as_fraction()
    assert arith.down(third).direction is numerics.Direction.DOWN
    assert arith.up(third).direction is numerics.Direction.UP


@pytest.mark.parametrize('direction,digits,expected', [
    (numerics.Direction.DOWN, 5, '3.3333e-1'),
    (numerics.Direction.UP, 5, '3.3334e-1'),
    (numerics.Direction.DOWN, 1, '3e-1'),
    (numerics.Direction.UP, 1, '4e-1'),
])
def test_format_directed(direction, digits, expected):
    arith = numerics.arithmetic(128)
    value = arith.lower(arith.exact('1/3')) if direction is numerics.Direction.DOWN \
        else arith.upper(arith.exact('1/3'))
    assert numerics.format_directed(value, direction, digits) == expected


def test_format_directed_zero_and_integers():
    assert numerics.format_directed(mpmath.mpf(0), numerics.Direction.UP) == '0'
    assert numerics.format_directed(mpmath.mpf(2), numerics.Direction.UP) == '2e+0'
    assert numerics.format_directed(mpmath.mpf(-2.5), numerics.Direction.DOWN) == '-2.5e+0'


@pytest.mark.parametrize('direction', list(numerics.Direction))
def test_directed_text_never_weakens(direction):
    arith = numerics.arithmetic(192)
    value = arith.exp(arith.exact(-59))
    exact = arith.down(value) if direction is numerics.Direction.DOWN else arith.up(value)

    text = exact.to_text(12)
    parsed = numerics.parse_directed(text, direction, 192)

    assert parsed.direction is direction
    if direction is numerics.Direction.DOWN:
        assert parsed.as_fraction() <= exact.as_fraction()
    else:
        assert parsed.as_fraction() >= exact.as_fraction()


def test_parse_directed_rejects_garbage():
    with pytest.raises(errors.LiteralError):
        numerics.parse_directed('twelve', numerics.Direction.UP, 64)


@pytest.mark.parametrize('text,expected', [
    ('0.93', Fraction(93, 100)),
    ('4e18', Fraction(4 * 10 ** 18)),
    ('4.589e-9', Fraction(4589, 10 ** 12)),
    ('1/3', Fraction(1, 3)),
    (' 20499925573 ', Fraction(20499925573)),
    ('e59', numerics.ExpOf(Fraction(59))),
    ('E38', numerics.ExpOf(Fraction(38))),
    ('e42.5', numerics.ExpOf(Fraction(85, 2))),
])
def test_parse_real(text, expected):
    assert numerics.parse_real(text) == expected


@pytest.mark.parametrize('text', ['', 'abc', 'e', 'e5x', '1/0', '4e18e2'])
def test_parse_real_errors(text):
    with pytest.raises(errors.LiteralError):
        numerics.parse_real(text)


@pytest.mark.parametrize('value,expected', [
    (Fraction(93, 100), '0.93'),
    (Fraction(4589, 10 ** 12), '4.589e-9'),
    (Fraction(4 * 10 ** 18), '4e18'),
    (Fraction(20499925573), '20499925573'),
    (Fraction(1, 3), '1/3'),
    (Fraction(1, 10 ** 4), '0.0001'),
])
def test_format_literal(value, expected):
    assert numerics.format_literal(value) == expected
    assert numerics.parse_real(expected) == value


def test_exp_of_string():
    assert str(numerics.ExpOf(Fraction(59))) == 'e59'


def test_exact_accepts_every_input_form():
    arith = numerics.arithmetic(128)
    enclosure = arith.enclose(arith.exact('1/3'))
    forms = [Fraction(1, 3), '1/3', enclosure, arith.exact(Fraction(1, 3)),
             numerics.arithmetic(256).exact(Fraction(1, 3))]
    for form in forms:
        assert Fraction(1, 3) in arith.enclose(arith.exact(form))

    e = arith.enclose(arith.exact(numerics.ExpOf(Fraction(1))))
    assert float(e) == pytest.approx(2.718281828459045)


@pytest.mark.parametrize('value', [True, None, 1.5, object()])
def test_exact_rejects_other_types(value):
    with pytest.raises(TypeError):
        numerics.arithmetic(64).exact(value)


@pytest.mark.parametrize('function,argument', [
    ('log', 0),
    ('log', -1),
    ('sqrt', -1),
])
def test_domain_errors(function, argument):
    arith = numerics.arithmetic(64)
    with pytest.raises(errors.DomainError):
        getattr(arith, function)(argument)


def test_log_of_exp_literal_is_the_exponent():
    arith = numerics.arithmetic(64)
    assert Fraction(59) in arith.enclose(numerics.log_of(numerics.ExpOf(Fraction(59)), arith))


def test_interval_helpers():
    arith = numerics.arithmetic(64)
    straddle = arith.span(-2, 3)
    assert arith.enclose(arith.magnitude(straddle)).lower.as_fraction() == 0
    assert arith.enclose(arith.magnitude(straddle)).upper.as_fraction() == 3
    assert arith.enclose(arith.nonnegative(straddle)).lower.as_fraction() == 0
    assert arith.enclose(arith.magnitude(arith.span(-5, -1))).lower.as_fraction() == 1

    smaller = arith.enclose(arith.minimum(arith.span(1, 4), arith.span(2, 3)))
    assert (smaller.lower.as_fraction(), smaller.upper.as_fraction()) == (1, 3)

    assert arith.floor_lower(arith.exact('7/2')) == 3
    assert arith.ceil_lower(arith.exact('7/2')) == 4
    assert arith.floor_upper(arith.exact('7/2')) == 3
    assert arith.enclose(arith.polyval([1, 2, 3], 2)).lower.as_fraction() == 17


def test_arithmetic_is_shared_per_precision():
    assert numerics.arithmetic(96) is numerics.arithmetic(96)
    assert numerics.arithmetic(96).precision == 96
