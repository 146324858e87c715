"""Basic tests for the fixtures."""

from primecert import config
from primecert import optimizer
from primecert import plugin


def test_precision_option(primecert_precision, arithmetic):
    """The session precision follows ``--primecert-precision``, then the environment."""
    assert primecert_precision >= config.MIN_PRECISION
    assert arithmetic.precision == primecert_precision


def test_fixture_zeros(fixture_zeros):
    assert fixture_zeros.count == 30
    assert fixture_zeros.source == plugin.FIXTURE_ZEROS


def test_reference_rows(reference_rows, zeta_constants):
    assert reference_rows is optimizer.REFERENCE_ROWS
    assert zeta_constants.identifier == 'default/rosser'


def test_slow_marker_is_registered(request):
    assert any(line.startswith('slow:') for line in request.config.getini('markers'))


_SUITE = """
import pytest

@pytest.mark.slow
def test_slow():
    pass

def test_fast(arithmetic):
    assert arithmetic.precision == 128

def test_zero_list(zero_list):
    pass
"""


def test_slow_tests_need_run_slow(pytester):
    pytester.makeconftest("pytest_plugins = ['primecert.plugin']")
    pytester.makepyfile(_SUITE)

    result = pytester.runpytest('--primecert-precision=128')
    result.assert_outcomes(passed=1, skipped=2)

    result = pytester.runpytest('--primecert-precision=128', '--run-slow')
    result.assert_outcomes(passed=2, skipped=1)


def test_zeros_file_option(pytester):
    pytester.makeconftest("pytest_plugins = ['primecert.plugin']")
    pytester.makepyfile("""
        def test_zero_list(zero_list):
            assert zero_list.count == 30
    """)

    result = pytester.runpytest('--zeros-file=%s' % plugin.FIXTURE_ZEROS)
    result.assert_outcomes(passed=1)
