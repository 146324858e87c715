"""Certificate reports and their verification.

Three formats are written:

* ``text``: ``key=value`` lines, one record per block, blocks separated by a
  blank line.
* ``json-line``: one JSON object per line with the same keys.
* ``csv``: the columns of `CSV_COLUMNS`, one certificate per row.
* ``table``: the CSV columns aligned for reading, headed by `TABLE_HEADERS`.

Real values are written with their rounding direction in the key, e.g.
``margin.down`` or ``B2.up``, and are rounded in that direction when printed so
re-reading a report never strengthens a bound. CSV rows hold the Down ends of
``Delta`` and ``margin``.
"""

import collections
import csv
import fractions
import io
import json
import logging

from primecert import certifier
from primecert import config
from primecert import errors
from primecert import numerics
from primecert import version
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)

#: Identifies the report layout; bumped on incompatible changes.
REPORT_FORMAT = 'primecert-certificate/1'

#: Column order of CSV output.
CSV_COLUMNS = ('log_x0', 'm', 'delta', 'T1', 'sigma0', 'a', 'Delta', 'margin', 'verdict')

OUTPUT_FORMATS = ('text', 'csv', 'json-line', 'table')

_DIRECTED_COLUMNS = {'Delta': 'Delta.down', 'margin': 'margin.down'}

#: Column headers of the aligned table; rounded columns carry their direction.
TABLE_HEADERS = tuple(_DIRECTED_COLUMNS.get(column, column) for column in CSV_COLUMNS)

_DIGITS = 20

_BREAKDOWN_TERMS = ('Sigma01', 'Sigma02', 'Sigma11', 'Sigma12', 'B0', 'B1', 'B2',
                    'B3_at_sigma0', 'B3_at_one_minus_sigma0', 'B41', 'B42',
                    'total_with_X0_powers')


def _literal(value):
    if isinstance(value, numerics.ExpOf):
        return str(value)
    return numerics.format_literal(value)


def log_x0_label(x0):
    """``59`` for x0 = e^59, ``log(4e18)`` for a rational x0."""
    if isinstance(x0, numerics.ExpOf):
        return numerics.format_literal(x0.exponent)
    return 'log(%s)' % numerics.format_literal(x0)


def certificate_record(certificate, label=None):
    """Flatten a certificate into an ordered ``key -> text`` mapping.

    Arguments:
        certificate (Certificate):
            The certificate to describe.

        label (str):
            Optional. A name for the record, such as a table row.
    """
    params = certificate.params
    record = collections.OrderedDict()
    record['format'] = REPORT_FORMAT
    record['version'] = version.__version__
    if label is not None:
        record['label'] = label
    record['verdict'] = certificate.verdict.value
    record['constants_id'] = certificate.constants_id
    record['q_variant'] = certificate.q_variant
    record['precision'] = str(certificate.precision_used)

    record['x0'] = _literal(params.x0)
    record['m'] = str(params.m)
    record['delta'] = _literal(params.delta)
    record['a'] = _literal(params.a)
    record['T1'] = _literal(params.T1)
    record['sigma0'] = _literal(params.sigma0)
    record['u'] = _literal(params.u)

    def enclosure(name, value):
        record[name + '.down'] = value.lower.to_text(_DIGITS)
        record[name + '.up'] = value.upper.to_text(_DIGITS)

    enclosure('log_X0', params.log_X0)
    enclosure('X0', params.X0)
    enclosure('Delta', params.Delta)
    record['Delta_floor'] = str(params.Delta_floor)

    record['omega.up'] = certificate.omega.upper.to_text(_DIGITS)
    record['F0.down'] = certificate.positive_term.to_text(_DIGITS)
    breakdown = certificate.breakdown
    for name in _BREAKDOWN_TERMS:
        record[name + '.up'] = getattr(breakdown, name).upper.to_text(_DIGITS)
    record['B0.selected'] = breakdown.B0_selected
    record['B1.selected'] = breakdown.B1_selected
    record['psi_tail_term.up'] = certificate.psi_tail_term.upper.to_text(_DIGITS)
    record['omega_term.up'] = certificate.omega_term.upper.to_text(_DIGITS)
    record['bt_term.up'] = certificate.bt_term.upper.to_text(_DIGITS)
    record['margin.down'] = certificate.margin.to_text(_DIGITS)
    record['margin.up'] = certificate.margin_upper.to_text(_DIGITS)
    return record


def csv_row(certificate):
    params = certificate.params
    return collections.OrderedDict([
        ('log_x0', log_x0_label(params.x0)),
        ('m', str(params.m)),
        ('delta', _literal(params.delta)),
        ('T1', _literal(params.T1)),
        ('sigma0', _literal(params.sigma0)),
        ('a', _literal(params.a)),
        ('Delta', params.Delta.lower.to_text(_DIGITS)),
        ('margin', certificate.margin.to_text(_DIGITS)),
        ('verdict', certificate.verdict.value),
    ])


def format_key_values(records):
    blocks = ['\n'.join('%s=%s' % item for item in record.items()) for record in records]
    return '\n\n'.join(blocks) + '\n'


def format_json_lines(records):
    return ''.join(json.dumps(record) + '\n' for record in records)


def format_csv(rows):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def format_table(rows):
    """An aligned text table of CSV-style rows under `TABLE_HEADERS`."""
    headers = TABLE_HEADERS
    rows = [[row[column] for column in CSV_COLUMNS] for row in rows]
    widths = [max([len(header)] + [len(row[index]) for row in rows])
              for index, header in enumerate(headers)]
    lines = ['  '.join(header.rjust(width) for header, width in zip(headers, widths))]
    lines.append('  '.join('-' * width for width in widths))
    for row in rows:
        lines.append('  '.join(value.rjust(width) for value, width in zip(row, widths)))
    return '\n'.join(lines) + '\n'


def render(certificates, output='text', labels=None):
    """Render certificates in one of `OUTPUT_FORMATS`."""
    labels = labels or [None] * len(certificates)
    if output == 'csv':
        return format_csv(csv_row(certificate) for certificate in certificates)
    if output == 'table':
        return format_table(csv_row(certificate) for certificate in certificates)
    records = [certificate_record(certificate, label)
               for certificate, label in zip(certificates, labels)]
    if output == 'json-line':
        return format_json_lines(records)
    if output == 'text':
        return format_key_values(records)
    raise ValueError('Unknown output format %r; expected one of %s'
                     % (output, ', '.join(OUTPUT_FORMATS)))


def _parse_table(lines):
    rows = []
    for line_number, line in enumerate(lines, 3):
        values = line.split()
        if len(values) != len(CSV_COLUMNS):
            raise errors.ReportFormatError('line %d: expected %d columns, got %d'
                                           % (line_number, len(CSV_COLUMNS), len(values)))
        rows.append(dict(zip(CSV_COLUMNS, values)))
    return rows


def parse_report(text):
    """Parse any report this module writes.

    Returns (list):
        One ``dict`` per record, keyed as written.

    Raises:
        ReportFormatError: The text is none of the known formats.
    """
    stripped = text.strip()
    if not stripped:
        raise errors.ReportFormatError('The report is empty')

    if stripped.startswith('{'):
        records = []
        for line_number, line in enumerate(stripped.splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except ValueError:
                raise errors.ReportFormatError('line %d: invalid JSON record' % line_number)
        return records

    if stripped.splitlines()[0].strip() == ','.join(CSV_COLUMNS):
        return [dict(row) for row in csv.DictReader(io.StringIO(stripped))]

    lines = stripped.splitlines()
    if tuple(lines[0].split()) == TABLE_HEADERS:
        return _parse_table(lines[2:])

    records = []
    for block in stripped.split('\n\n'):
        record = collections.OrderedDict()
        for line in block.splitlines():
            key, sep, value = line.partition('=')
            if not sep:
                raise errors.ReportFormatError('Expected key=value, got %r' % line)
            record[key.strip()] = value.strip()
        records.append(record)
    return records


def _margin_text(record):
    for key in ('margin.down', 'margin'):
        if key in record:
            return record[key]
    raise errors.ReportFormatError('Record has no margin: %r' % (sorted(record),))


def _implied_verdict(record):
    """The verdict the record's own margin supports."""
    lower = fractions.Fraction(_margin_text(record))
    upper_text = record.get('margin.up')
    if lower > 0:
        return certifier.Verdict.PASS
    if upper_text is not None and fractions.Fraction(upper_text) < 0:
        return certifier.Verdict.FAIL
    if upper_text is None and record.get('verdict') == certifier.Verdict.FAIL.value:
        return certifier.Verdict.FAIL
    return certifier.Verdict.UNKNOWN


def _recompute(record, constants, precision):
    x0 = record.get('x0')
    if x0 is None:
        label = record['log_x0']
        x0 = label[4:-1] if label.startswith('log(') else 'e' + label
    coefficient_set = record.get('constants_id', '').rpartition('/')[2]
    if coefficient_set in zeta_data.COEFFICIENT_SETS:
        constants = constants.with_coefficient_set(coefficient_set)
    params = certifier.derive_params(x0, int(record['m']), record['delta'], record['a'],
                                     record['T1'], record['sigma0'], constants, precision)
    q_variant = record.get('q_variant', 'rlog')
    return certifier.certify(params, constants, precision, q_variant).verdict


#: The outcome of checking one record.
VerifiedRecord = collections.namedtuple(
    'VerifiedRecord', ['record', 'recorded', 'implied', 'recomputed', 'ok'])


def verify_report(text, recompute=False, constants=zeta_data.DEFAULT_CONSTANTS,
                  precision=None):
    """Check that each record's verdict follows from its numbers.

    Arguments:
        text (str):
            The report.

        recompute (bool):
            Also certify the record's parameters again and compare verdicts.

        precision (int):
            Optional. Precision for recomputation; defaults to the record's.

    Returns (list):
        A `VerifiedRecord` per record.
    """
    results = []
    for record in parse_report(text):
        try:
            recorded = certifier.Verdict(record['verdict'])
        except (KeyError, ValueError):
            raise errors.ReportFormatError('Record has no valid verdict: %r' % (dict(record),))

        try:
            implied = _implied_verdict(record)
        except (ValueError, ZeroDivisionError):
            raise errors.ReportFormatError('Unparsable margin %r' % _margin_text(record))

        recomputed = None
        if recompute:
            bits = precision or int(record.get('precision', 0)) or config.DEFAULT_PRECISION
            recomputed = _recompute(record, constants, bits)

        ok = recorded is implied and recomputed in (None, recorded)
        if not ok:
            LOGGER.warning('Report record disagrees: recorded %s, implied %s, recomputed %s',
                           recorded.value, implied.value,
                           recomputed.value if recomputed else '-')
        results.append(VerifiedRecord(record, recorded, implied, recomputed, ok))
    return results
