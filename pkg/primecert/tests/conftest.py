"""Common fixtures and functions for use in tests."""

import contextlib

import pytest

from primecert import certifier
from primecert import ledger


def certify_row(row, precision, **changes):
    """Certify a table row, optionally with some parameters replaced."""
    values = dict(x0=row.x0, m=row.m, delta=row.delta, a=row.a, T1=row.T1,
                  sigma0=row.sigma0)
    values.update(changes)
    params = certifier.derive_params(precision=precision, **values)
    return certifier.certify(params, precision=precision)


@pytest.fixture(scope='session')
def certificate(reference_rows, primecert_precision):
    """The certificate of the log(4e18) table row."""
    return certify_row(reference_rows[0], primecert_precision)


@pytest.fixture(scope='session')
def failed_certificate(reference_rows, primecert_precision):
    """The log(4e18) row with an edge width a = 0.49 the inequality can't absorb."""
    return certify_row(reference_rows[0], primecert_precision, a='0.49')


@contextlib.contextmanager
def check_teardown(certificate_ledger):
    yield certificate_ledger

    ledger.METADATA.drop_all(certificate_ledger.engine)
    certificate_ledger.engine.dispose()


@pytest.fixture
def memory_ledger():
    """A ledger in a private in-memory SQLite database."""
    with check_teardown(ledger.CertificateLedger('sqlite://')) as fixture:
        yield fixture
