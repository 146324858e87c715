"""A pytest plugin with fixtures for tests of certificate computations.

Enable it from a ``conftest.py``::

    pytest_plugins = ['primecert.plugin']
"""

import os

import pytest

from primecert import config
from primecert import numerics
from primecert import optimizer
from primecert import zeta_data


#: The bundled file with the first 30 zeta zeros, used by the test suite.
FIXTURE_ZEROS = os.path.join(os.path.dirname(__file__), 'tests', 'data', 'zeros_first30.txt')


def pytest_addoption(parser):
    """Add configuration options for primecert."""
    parser.addoption(
        '--zeros-file', action='store', default=None,
        help='A file of zeta zero ordinates, one per line. Tests that need a '
             'real zero list are skipped without it. Example: '
             '--zeros-file=zeros6.txt')

    parser.addoption(
        '--primecert-precision', type=int, default=None,
        help='Working precision in bits for the `arithmetic` fixture. Defaults '
             'to $%s or %d.' % (config.PRECISION_ENV_VAR, config.DEFAULT_PRECISION))

    parser.addoption(
        '--run-slow', action='store_true', default=False,
        help='Also run tests marked `slow`, such as the optimizer searches and '
             'the full table reproduction.')


def pytest_configure(config):  # pylint: disable=redefined-outer-name
    config.addinivalue_line('markers', 'slow: a test that takes minutes; needs --run-slow')


def pytest_collection_modifyitems(config, items):  # pylint: disable=redefined-outer-name
    if config.getoption('--run-slow'):
        return
    skip_slow = pytest.mark.skip(reason='slow; pass --run-slow to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope='session')
def primecert_precision(request):
    """The working precision for the session, in bits."""
    return config.resolve_precision(request.config.getoption('--primecert-precision'))


@pytest.fixture(scope='session')
def arithmetic(primecert_precision):
    """The shared `primecert.numerics.Arithmetic` at the session precision."""
    return numerics.arithmetic(primecert_precision)


@pytest.fixture(scope='session')
def zeta_constants():
    """The built-in zeta constants."""
    return zeta_data.DEFAULT_CONSTANTS


@pytest.fixture(scope='session')
def fixture_zeros():
    """The first 30 zeta zeros bundled with the test suite."""
    return zeta_data.load_zeros(FIXTURE_ZEROS)


@pytest.fixture(scope='session')
def zero_list(request):
    """The zero list given with ``--zeros-file``; skips the test without one."""
    path = request.config.getoption('--zeros-file')
    if not path:
        pytest.skip('no --zeros-file given')
    return zeta_data.load_zeros(path)


@pytest.fixture(scope='session')
def reference_rows():
    """The published parameter table, in row order."""
    return optimizer.REFERENCE_ROWS
