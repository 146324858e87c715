"""A SQL ledger of issued certificates.

Each certificate is stored as one row holding its parameters, its verdict, the
Down end of Delta and of the margin, and the full key=value report so a row can
be verified again later with `primecert.report.verify_report`.

Usage::

    ledger = CertificateLedger('sqlite:///certificates.db')
    ledger.record(certificate)
    for row in ledger.records(verdict='PASS'):
        ...
"""

import datetime
import logging

import sqlalchemy as sqla
import sqlalchemy.exc as sqla_exc

from primecert import errors
from primecert import report


LOGGER = logging.getLogger(__name__)

METADATA = sqla.MetaData()

#: One row per recorded certificate.
CERTIFICATES = sqla.Table(
    'certificates', METADATA,
    sqla.Column('id', sqla.Integer, primary_key=True),
    sqla.Column('recorded_at', sqla.DateTime, nullable=False),
    sqla.Column('label', sqla.String(64)),
    sqla.Column('verdict', sqla.String(8), nullable=False),
    sqla.Column('x0', sqla.String(64), nullable=False),
    sqla.Column('m', sqla.Integer, nullable=False),
    sqla.Column('delta', sqla.String(64), nullable=False),
    sqla.Column('a', sqla.String(64), nullable=False),
    sqla.Column('T1', sqla.String(64), nullable=False),
    sqla.Column('sigma0', sqla.String(64), nullable=False),
    sqla.Column('Delta_down', sqla.String(64), nullable=False),
    sqla.Column('margin_down', sqla.String(64), nullable=False),
    sqla.Column('constants_id', sqla.String(128), nullable=False),
    sqla.Column('q_variant', sqla.String(8), nullable=False),
    sqla.Column('precision', sqla.Integer, nullable=False),
    sqla.Column('report', sqla.Text, nullable=False),
)


class CertificateLedger(object):
    """Record certificates in the database at ``url``.

    The table is created on first use. The recording time comes from
    ``datetime.datetime.now`` in UTC, so it follows ``freezegun`` in tests.

    Arguments:
        url (str):
            An SQLAlchemy database URL, e.g. ``sqlite:///ledger.db``.

        engine (`sqlalchemy.engine.Engine`):
            Optional. Use this engine instead of creating one from ``url``.
    """
    def __init__(self, url=None, engine=None):
        if engine is None:
            if not url:
                raise ValueError('A ledger needs a database URL or an engine')
            engine = sqla.create_engine(url)
        self.engine = engine
        try:
            METADATA.create_all(self.engine)
        except sqla_exc.SQLAlchemyError as exc:
            raise errors.LedgerError('Cannot create the ledger table: %s' % exc)

    def record(self, certificate, label=None):
        """Store ``certificate`` and return the new row's id."""
        params = certificate.params
        values = report.certificate_record(certificate, label)
        row = {
            'recorded_at': datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None),
            'label': label,
            'verdict': certificate.verdict.value,
            'x0': values['x0'],
            'm': params.m,
            'delta': values['delta'],
            'a': values['a'],
            'T1': values['T1'],
            'sigma0': values['sigma0'],
            'Delta_down': values['Delta.down'],
            'margin_down': values['margin.down'],
            'constants_id': certificate.constants_id,
            'q_variant': certificate.q_variant,
            'precision': certificate.precision_used,
            'report': report.format_key_values([values]),
        }
        try:
            with self.engine.begin() as connection:
                result = connection.execute(CERTIFICATES.insert().values(**row))
                row_id = result.inserted_primary_key[0]
        except sqla_exc.SQLAlchemyError as exc:
            raise errors.LedgerError('Cannot record the certificate: %s' % exc)

        LOGGER.info('Recorded %s certificate #%s for m=%d delta=%s',
                    row['verdict'], row_id, params.m, row['delta'])
        return row_id

    def records(self, verdict=None):
        """The stored rows, oldest first, optionally only those with ``verdict``.

        Returns (list):
            One ``dict`` per row.
        """
        query = sqla.select(CERTIFICATES).order_by(CERTIFICATES.c.id)
        if verdict is not None:
            query = query.where(CERTIFICATES.c.verdict == verdict)
        with self.engine.connect() as connection:
            # pylint: disable=protected-access
            return [dict(row._mapping) for row in connection.execute(query)]

    def verify(self, recompute=False):
        """Run `report.verify_report` over every stored report.

        Returns (list):
            ``(row id, ok)`` pairs.
        """
        outcome = []
        for row in self.records():
            checked = report.verify_report(row['report'], recompute=recompute)
            outcome.append((row['id'], all(result.ok for result in checked)))
        return outcome
