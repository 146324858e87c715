"""Prime gaps, interval checks and the ternary Goldbach extent.

The sieve is an odd-only segmented sieve of Eratosthenes over numpy boolean
arrays. Base primes go up to min(sqrt(hi), 2^24); above 2^48 the survivors of
the sieve are confirmed with a deterministic Miller-Rabin test.
"""

import collections
import concurrent.futures
import dataclasses
import fractions
import logging
import math

import numpy

from primecert import errors
from primecert import numerics


LOGGER = logging.getLogger(__name__)

#: Odd numbers per sieve segment.
SEGMENT_SIZE = 1 << 24

#: Largest span a single call may sieve.
MAX_RANGE = 10 ** 10

#: Largest value the sieve handles.
MAX_VALUE = (1 << 64) - 1

#: Base primes stop here; larger survivors are confirmed by Miller-Rabin.
BASE_PRIME_LIMIT = 1 << 24

#: Miller-Rabin with these bases is deterministic below `MILLER_RABIN_LIMIT`.
MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MILLER_RABIN_LIMIT = 3317044064679887385961981

#: The Goldbach extent is stated from this N unless told otherwise.
GOLDBACH_N = 4 * 10 ** 18


def is_prime(n):
    """Deterministic Miller-Rabin primality test.

    Raises:
        RangeTooLargeError: ``n`` is at or above 3.3e24, where the fixed base
            set stops being a proof.
    """
    if n >= MILLER_RABIN_LIMIT:
        raise errors.RangeTooLargeError('Miller-Rabin is only deterministic below %d'
                                        % MILLER_RABIN_LIMIT)
    if n < 2:
        return False
    for prime in MILLER_RABIN_BASES:
        if n % prime == 0:
            return n == prime

    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for base in MILLER_RABIN_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def base_primes(limit):
    """The odd primes up to ``limit`` as an int64 array."""
    if limit < 3:
        return numpy.zeros(0, dtype=numpy.int64)
    flags = numpy.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    primes = numpy.flatnonzero(flags)
    return primes[primes > 2].astype(numpy.int64)


#: What one segment contributes to a `GapReport`.
_Segment = collections.namedtuple(
    '_Segment', ['first', 'last', 'count', 'max_gap', 'max_gap_location'])


def _segment_primes(start, stop, primes, confirm_above):
    """The primes among the odd numbers in [start, stop), start odd, as a uint64 array."""
    size = (stop - start + 1) // 2
    mask = numpy.ones(size, dtype=bool)
    if start == 1:
        mask[0] = False

    for p in primes.tolist():
        square = p * p
        if square >= stop:
            break
        first = max(square, -(-start // p) * p)
        if not first & 1:
            first += p
        if first < stop:
            mask[(first - start) // 2::p] = False

    offsets = numpy.flatnonzero(mask).astype(numpy.uint64)
    values = numpy.uint64(start) + numpy.uint64(2) * offsets
    if confirm_above is not None and len(values):
        keep = numpy.array([int(value) <= confirm_above or is_prime(int(value))
                            for value in values.tolist()], dtype=bool)
        values = values[keep]
    return values


def _scan_segment(start, stop, primes, confirm_above):
    values = _segment_primes(start, stop, primes, confirm_above)
    if not len(values):
        return None
    if len(values) == 1:
        return _Segment(int(values[0]), int(values[0]), 1, 0, None)

    gaps = numpy.diff(values)
    where = int(numpy.argmax(gaps))
    return _Segment(int(values[0]), int(values[-1]), len(values), int(gaps[where]),
                    int(values[where]))


@dataclasses.dataclass(frozen=True)
class GapReport(object):
    """The largest gap between consecutive primes in [lo, hi].

    ``max_gap_location`` is the prime that starts the gap, the smallest such
    prime on ties, or ``None`` with ``max_gap`` 0 when there are fewer than two
    primes in range.
    """
    lo: int
    hi: int
    max_gap: int
    max_gap_location: int
    prime_count: int


def _check_range(lo, hi):
    if lo > hi:
        raise ValueError('Empty range [%d, %d]' % (lo, hi))
    if hi > MAX_VALUE:
        raise errors.RangeTooLargeError('Overflow: %d exceeds 2^64 - 1' % hi)
    if hi - lo > MAX_RANGE:
        raise errors.RangeTooLargeError('Range of %d exceeds the %d limit per call'
                                        % (hi - lo, MAX_RANGE))


def sieve_gaps(lo, hi, workers=None, segment_size=SEGMENT_SIZE):
    """Find the maximal prime gap in [lo, hi].

    Segments are sieved concurrently and merged in order, so the result does
    not depend on scheduling.

    Arguments:
        lo (int):
            Lower end, inclusive; values below 2 are treated as 2.

        hi (int):
            Upper end, inclusive; at most 2^64 - 1 and at most 1e10 above lo.

        workers (int):
            Optional. Thread pool size; defaults to the executor's choice.

    Returns (GapReport):
        The gap, where it starts, and how many primes lie in range.

    Raises:
        RangeTooLargeError: The range is too long or ``hi`` overflows 64 bits.
    """
    _check_range(lo, hi)
    start = max(lo, 2)
    if start > hi:
        return GapReport(lo, hi, 0, None, 0)

    root = math.isqrt(hi)
    primes = base_primes(min(root, BASE_PRIME_LIMIT))
    confirm_above = None if root <= BASE_PRIME_LIMIT else BASE_PRIME_LIMIT ** 2

    odd_start = start | 1
    bounds = []
    for segment_start in range(odd_start, hi + 1, 2 * segment_size):
        bounds.append((segment_start, min(segment_start + 2 * segment_size, hi + 1)))

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        segments = list(executor.map(
            lambda bound: _scan_segment(bound[0], bound[1], primes, confirm_above), bounds))

    previous = 2 if start == 2 else None
    count = 1 if start == 2 else 0
    max_gap, location = 0, None
    for segment in segments:
        if segment is None:
            continue
        if previous is not None and segment.first - previous > max_gap:
            max_gap, location = segment.first - previous, previous
        if segment.max_gap > max_gap:
            max_gap, location = segment.max_gap, segment.max_gap_location
        count += segment.count
        previous = segment.last

    LOGGER.debug('Sieved [%d, %d] in %d segments: %d primes, max gap %d', lo, hi,
                 len(bounds), count, max_gap)
    return GapReport(lo, hi, max_gap, location, count)


def primes_between(lo, hi):
    """The primes in [lo, hi], ascending."""
    _check_range(lo, hi)
    start = max(lo, 2)
    if start > hi:
        return []
    root = math.isqrt(hi)
    primes = base_primes(min(root, BASE_PRIME_LIMIT))
    confirm_above = None if root <= BASE_PRIME_LIMIT else BASE_PRIME_LIMIT ** 2
    found = [2] if start == 2 else []
    found.extend(_segment_primes(start | 1, hi + 1, primes, confirm_above).tolist())
    return [int(value) for value in found]


@dataclasses.dataclass(frozen=True)
class IntervalCheck(object):
    """Whether the open interval (x(1 - 1/Delta), x) holds a prime."""
    x: int
    Delta: fractions.Fraction
    low: int
    high: int
    contains_prime: bool
    witness: int


def check_interval(x, Delta):
    """Look for a prime in (x(1 - 1/Delta), x).

    Arguments:
        x (int):
            The right end, at most 2^64 - 1.

        Delta:
            The interval ratio; any rational.

    Returns (IntervalCheck):
        ``witness`` is the smallest prime in the interval, re-verified with
        `is_prime`, or ``None``.

    Raises:
        RangeTooLargeError: The interval is longer than a single sieve call.
    """
    Delta = fractions.Fraction(Delta)
    if Delta <= 1:
        raise ValueError('Delta must exceed 1, got %s' % numerics.format_literal(Delta))
    low = math.floor(x - fractions.Fraction(x) / Delta) + 1
    high = x - 1
    if low > high:
        return IntervalCheck(x, Delta, low, high, False, None)

    _check_range(low, high)
    for candidate in primes_between(low, high):
        if is_prime(candidate):
            return IntervalCheck(x, Delta, low, high, True, candidate)
        LOGGER.warning('Sieve reported composite %d; skipping', candidate)
    return IntervalCheck(x, Delta, low, high, False, None)


@dataclasses.dataclass(frozen=True)
class GoldbachExtent(object):
    """Odd numbers below ``product`` = N Delta are sums of at most three primes."""
    N: int
    Delta: int
    product: int

    @property
    def statement(self):
        return ('every odd number greater than 5 and smaller than %d is a sum of at most '
                'three primes' % self.product)

    def leading_digits(self, digits=5):
        """The product in scientific notation, truncated to ``digits`` significant digits."""
        text = str(self.product)
        mantissa = text[0] + ('.' + text[1:digits] if digits > 1 else '')
        return '%se%d' % (mantissa, len(text) - 1)


def goldbach_extent(N=GOLDBACH_N, Delta_int=1):
    """The exact product N Delta bounding the ternary Goldbach extent.

    If every gap between consecutive primes up to N Delta is at most N, the
    verified binary Goldbach partitions up to N extend to every odd number up
    to N Delta.
    """
    if N <= 0 or Delta_int < 1:
        raise ValueError('Need N > 0 and Delta >= 1, got %d and %d' % (N, Delta_int))
    return GoldbachExtent(N, Delta_int, N * Delta_int)


def goldbach_boundary_partitions(N=GOLDBACH_N):
    """Two-prime partitions of N + 2 and N + 4 just past the verified range.

    Returns (list):
        ``(target, small, large, all_prime)`` for N + 2 = 211 + (N - 209) and
        N + 4 = 313 + (N - 309).
    """
    partitions = []
    for target, small in ((N + 2, 211), (N + 4, 313)):
        large = target - small
        partitions.append((target, small, large, is_prime(small) and is_prime(large)))
    return partitions


def interval_length(x0, Delta, arith=None):
    """x0/Delta, the length of the interval a certificate guarantees at x0.

    Returns (Enclosure):
        The length.
    """
    arith = arith or numerics.arithmetic()
    return arith.enclose(arith.exact(x0) / arith.exact(Delta))
