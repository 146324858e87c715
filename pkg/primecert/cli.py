"""The ``primecert`` command.

Real arguments accept decimals (``0.93``), scientific notation (``4e18``,
``4.589e-9``), ratios (``1/3``) and natural exponentials written ``eN``
(``e59`` is e^59).

Exit codes: 0 on PASS or success, 1 on FAIL, UNKNOWN or NO_CERTIFICATE, 2 on
usage, constraint and input errors.
"""

import argparse
import dataclasses
import logging
import sys

from primecert import certifier
from primecert import config
from primecert import errors
from primecert import gapscan
from primecert import ledger
from primecert import numerics
from primecert import optimizer
from primecert import report
from primecert import version
from primecert import zeta_data


LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_LITERAL_HELP = 'decimal, scientific (4e18) or eN for e^N'


def _real(text):
    try:
        return numerics.parse_real(text)
    except errors.LiteralError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rational(text):
    value = _real(text)
    if isinstance(value, numerics.ExpOf):
        raise argparse.ArgumentTypeError('expected a rational, got %s' % text)
    return value


def _integer(text):
    value = _rational(text)
    if value.denominator != 1:
        raise argparse.ArgumentTypeError('expected an integer, got %s' % text)
    return int(value)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='primecert',
        description='Certify that every interval (x(1 - 1/Delta), x) with x >= x0 '
                    'contains a prime.')
    parser.add_argument('--version', action='version', version=version.__version__)
    parser.add_argument('--verify-report', metavar='FILE',
                        help='Check that each record of a report supports its verdict.')
    parser.add_argument('--recompute', action='store_true',
                        help='With --verify-report, certify every record again.')
    parser.add_argument('--constants-file', metavar='FILE',
                        help='key=value overrides of the zeta constants.')
    parser.add_argument('--zeros-file', metavar='FILE',
                        help='Zeta zero ordinates; N0 and S0 are checked against it.')
    parser.add_argument('--precision', type=int, default=None,
                        help='Working precision in bits (default $%s or %d).'
                             % (config.PRECISION_ENV_VAR, config.DEFAULT_PRECISION))
    parser.add_argument('--q-variant', choices=config.Q_VARIANTS,
                        default=config.DEFAULT_Q_VARIANT,
                        help='Definition of q(T) in the zero sums.')
    parser.add_argument('--output', choices=report.OUTPUT_FORMATS, default='text')
    parser.add_argument('--coefficients', choices=zeta_data.COEFFICIENT_SETS + ('both',),
                        default=None,
                        help='R(T) coefficients for the zero counts; defaults to the '
                             'set named by the constants.')
    parser.add_argument('--ledger', metavar='URL',
                        help='Record certificates in this SQLAlchemy database.')
    parser.add_argument('--verbose', '-v', action='count', default=0)

    commands = parser.add_subparsers(dest='command', metavar='COMMAND')

    certify = commands.add_parser('certify', help='Certify one parameter system.')
    certify.add_argument('--x0', type=_real, required=True, help=_LITERAL_HELP)
    certify.add_argument('--m', type=_integer, required=True)
    certify.add_argument('--delta', type=_rational, required=True)
    certify.add_argument('--a', type=_rational, required=True)
    certify.add_argument('--t1', type=_rational, required=True)
    certify.add_argument('--sigma0', type=_rational, required=True)

    optimize = commands.add_parser('optimize', help='Search for the largest Delta.')
    optimize.add_argument('--x0', type=_real, help=_LITERAL_HELP)
    optimize.add_argument('--budget', type=int, default=None)
    optimize.add_argument('--spec-file', metavar='FILE', help='key=value search settings.')
    optimize.add_argument('--workers', type=int, default=None)

    table = commands.add_parser('table', help='Certify the published parameter table.')
    table.add_argument('--rows', default=None,
                       help='Comma-separated row labels, e.g. 43,59,log(4e18).')

    zeros = commands.add_parser('zeros', help='Zero file utilities.')
    zeros_commands = zeros.add_subparsers(dest='zeros_command', metavar='COMMAND')
    stats = zeros_commands.add_parser('stats', help='Count zeros and sum 1/gamma up to T.')
    stats.add_argument('--zeros-file', dest='stats_zeros_file', metavar='FILE')
    stats.add_argument('--T', dest='height', type=_rational, default=None,
                       help='Height; defaults to the last ordinate.')

    scan = commands.add_parser('gapscan', help='Find the largest prime gap in a range.')
    scan.add_argument('--from', dest='lo', type=_integer, required=True)
    scan.add_argument('--to', dest='hi', type=_integer, required=True)
    scan.add_argument('--workers', type=int, default=None)
    return parser


def _write(text):
    sys.stdout.write(text)


def _constants(args, precision):
    constants = zeta_data.DEFAULT_CONSTANTS
    if args.constants_file:
        constants = zeta_data.constants_from_file(args.constants_file)
    if args.zeros_file:
        zeros = zeta_data.load_zeros(args.zeros_file)
        zeta_data.validate_against_zeros(constants, zeros, numerics.arithmetic(precision))
    return constants


def _coefficient_sets(args, constants):
    if args.coefficients == 'both':
        return zeta_data.COEFFICIENT_SETS
    return (args.coefficients or constants.coefficient_set,)


def _record(args, certificates, labels):
    if not args.ledger:
        return
    book = ledger.CertificateLedger(args.ledger)
    for certificate, label in zip(certificates, labels):
        book.record(certificate, label)


def _exit_for(certificates):
    if certificates and all(certificate.passed for certificate in certificates):
        return EXIT_OK
    return EXIT_FAILED


def _run_certify(args, constants, precision):
    certificates, labels = [], []
    for name in _coefficient_sets(args, constants):
        chosen = constants.with_coefficient_set(name)
        params = certifier.derive_params(args.x0, args.m, args.delta, args.a, args.t1,
                                         args.sigma0, chosen, precision)
        certificates.append(certifier.certify(params, chosen, precision, args.q_variant))
        labels.append(name)
    _write(report.render(certificates, args.output, labels))
    _record(args, certificates, labels)
    return _exit_for(certificates)


def _search_spec(args, precision):
    values = config.load_key_values(args.spec_file) if args.spec_file else {}
    values.setdefault('precision', str(precision))
    values.setdefault('q_variant', args.q_variant)
    if args.budget is not None:
        values['budget'] = str(args.budget)
    spec = optimizer.SearchSpec.from_key_values(values, x0=args.x0)
    if args.workers is not None:
        spec = dataclasses.replace(spec, workers=args.workers)
    return spec


def _run_optimize(args, constants, precision):
    spec = _search_spec(args, precision)
    certificates, labels, missing = [], [], []
    for name in _coefficient_sets(args, constants):
        result = optimizer.optimize(spec, constants.with_coefficient_set(name))
        LOGGER.info('%s: %s after %d evaluations', name, result.status.value,
                    result.evaluations)
        if result.status is optimizer.SearchStatus.NO_CERTIFICATE:
            missing.append('status=%s\ncoefficients=%s\nevaluations=%d\n'
                           % (result.status.value, name, result.evaluations))
            continue
        certificates.append(result.best)
        labels.append(name)
        for row in result.dominated_rows:
            LOGGER.info('Matches or beats table row %s (Delta %d)', row.log_x0, row.Delta)

    if certificates:
        _write(report.render(certificates, args.output, labels))
        _record(args, certificates, labels)
    for status in missing:
        _write(status)
    if missing:
        return EXIT_FAILED
    return _exit_for(certificates)


def _run_table(args, constants, precision):
    rows = optimizer.REFERENCE_ROWS
    if args.rows:
        rows = optimizer.select_rows(args.rows.split(','))
    certificates, labels = [], []
    for name in _coefficient_sets(args, constants):
        comparisons = optimizer.reproduce_table(rows, constants.with_coefficient_set(name),
                                                precision, args.q_variant)
        certificates.extend(comparison.certificate for comparison in comparisons)
        labels.extend('%s/%s' % (comparison.row.log_x0, name) for comparison in comparisons)

    _write(report.render(certificates, args.output, labels))
    _record(args, certificates, labels)
    return _exit_for(certificates)


def _run_zeros(args, constants, precision):
    path = args.stats_zeros_file or args.zeros_file
    if args.zeros_command != 'stats' or not path:
        raise errors.ConfigFileError('usage: primecert zeros stats --zeros-file FILE [--T T]')
    zeros = zeta_data.load_zeros(path)
    height = zeros.max_height if args.height is None else args.height
    arith = numerics.arithmetic(precision)
    count, inv_sum = zeta_data.zero_stats(zeros, height, arith)
    enclosure = arith.enclose(inv_sum)

    lines = ['file=%s' % path, 'zeros_in_file=%d' % zeros.count,
             'T=%s' % numerics.format_literal(height), 'count=%d' % count,
             'inv_sum.down=%s' % enclosure.lower.to_text(),
             'inv_sum.up=%s' % enclosure.upper.to_text()]
    if height >= 2:
        low, high = zeta_data.N_bounds(height, constants, arith)
        lines.append('N_bounds.ceil_down=%d' % low)
        lines.append('N_bounds.floor_up=%d' % high)
    _write('\n'.join(lines) + '\n')
    return EXIT_OK


def _run_gapscan(args, constants, precision):
    # pylint: disable=unused-argument
    result = gapscan.sieve_gaps(args.lo, args.hi, workers=args.workers)
    location = '-' if result.max_gap_location is None else str(result.max_gap_location)
    _write('from=%d\nto=%d\nprime_count=%d\nmax_gap=%d\nmax_gap_location=%s\n'
           % (result.lo, result.hi, result.prime_count, result.max_gap, location))
    return EXIT_OK


def _run_verify(args, constants, precision):
    with open(args.verify_report) as fdesc:
        text = fdesc.read()
    results = report.verify_report(text, recompute=args.recompute, constants=constants,
                                   precision=args.precision)
    for index, result in enumerate(results, 1):
        recomputed = result.recomputed.value if result.recomputed else '-'
        _write('record=%d verdict=%s implied=%s recomputed=%s %s\n'
               % (index, result.recorded.value, result.implied.value, recomputed,
                  'ok' if result.ok else 'MISMATCH'))
    return EXIT_OK if all(result.ok for result in results) else EXIT_FAILED


_COMMANDS = {
    'certify': _run_certify,
    'optimize': _run_optimize,
    'table': _run_table,
    'zeros': _run_zeros,
    'gapscan': _run_gapscan,
}


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def run(argv=None):
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code

    _configure_logging(args.verbose)
    if not args.command and not args.verify_report:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        precision = config.resolve_precision(args.precision)
        numerics.check_precision(precision)
        constants = _constants(args, precision)
        if args.verify_report:
            return _run_verify(args, constants, precision)
        return _COMMANDS[args.command](args, constants, precision)
    except errors.ConstraintError as exc:
        sys.stderr.write('constraint violated: %s\n' % exc)
    except (errors.Error, ValueError, OSError) as exc:
        sys.stderr.write('error: %s\n' % exc)
    return EXIT_USAGE


def main():
    sys.exit(run())
