from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import json
import math
import traceback
from fractions import Fraction

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    BoundExceededError,
    DomainError,
    InvalidCompositionError,
    NonConvergenceError,
    ResourceLimitError,
)

IMP_ERR = {}
try:
    import mpmath
except ImportError as e:
    IMP_ERR['mpmath'] = {'error': traceback.format_exc(),
                         'exception': e}

DEFAULT_N_MAX = 2000
MAX_TABLE_N = 20000
DEFAULT_ENUM_BOUND = 25
DEFAULT_POCHHAMMER_TOL = 1e-15


class Partition():
    """
    Partition is a non-increasing tuple of positive integers.
    The empty partition has size 0, length 0 and, for the concavity
    constraint, an infinite smallest part.
    """

    __slots__ = ('parts', 'size', 'length')

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        for i, part in enumerate(parts):
            if part <= 0:
                raise InvalidCompositionError(
                    f"partition parts must be positive, got {part} in {parts}")
            if i > 0 and part > parts[i - 1]:
                raise InvalidCompositionError(
                    f"partition parts must be non-increasing: {parts}")
        self.parts = parts
        self.size = sum(parts)
        self.length = len(parts)

    @classmethod
    def from_frequencies(cls, frequencies):
        """
        from_frequencies expands a map k -> multiplicity into a partition.
        :param frequencies: dict of part -> number of parts equal to it
        :return: Partition
        """
        parts = []
        for k in sorted(frequencies, reverse=True):
            count = frequencies[k]
            if count < 0:
                raise InvalidCompositionError(
                    f"negative multiplicity {count} for part {k}")
            parts.extend([k] * count)
        return cls(parts)

    @property
    def smallest(self):
        return self.parts[-1] if self.parts else math.inf

    @property
    def largest(self):
        return self.parts[0] if self.parts else 0

    def frequencies(self):
        freq = {}
        for part in self.parts:
            freq[part] = freq.get(part, 0) + 1
        return freq

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return self.length

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"


class ConcaveComposition():
    """
    ConcaveComposition is the triple (minus, center, plus). Both sides are
    stored as partitions (non-increasing); read left to right the composition
    is minus, center, reversed(plus).
    """

    __slots__ = ('minus', 'center', 'plus')

    def __init__(self, minus, center, plus):
        if not isinstance(minus, Partition):
            minus = Partition(minus)
        if not isinstance(plus, Partition):
            plus = Partition(plus)
        if center < 0:
            raise InvalidCompositionError(f"central part must be non-negative, got {center}")
        if minus.smallest <= center or plus.smallest <= center:
            raise InvalidCompositionError(
                f"every part must exceed the central part {center}: "
                f"minus={list(minus.parts)} plus={list(plus.parts)}")
        self.minus = minus
        self.center = int(center)
        self.plus = plus

    @classmethod
    def from_sequence(cls, sequence, center_index=None):
        """
        from_sequence parses a composition written left to right, e.g. (4,4,3,2,1,2,3,3).
        Without center_index the central part is the unique minimum of the sequence.
        """
        seq = [int(v) for v in sequence]
        if not seq:
            raise InvalidCompositionError("empty sequence is not a concave composition")
        if center_index is None:
            low = min(seq)
            positions = [i for i, v in enumerate(seq) if v == low]
            if len(positions) != 1:
                raise InvalidCompositionError(
                    f"central part is ambiguous in {seq}: minimum {low} occurs {len(positions)} times")
            center_index = positions[0]
        if not 0 <= center_index < len(seq):
            raise InvalidCompositionError(f"center index {center_index} out of range for {seq}")
        return cls(seq[:center_index], seq[center_index], list(reversed(seq[center_index + 1:])))

    @property
    def total(self):
        return self.minus.size + self.center + self.plus.size

    def as_sequence(self):
        return list(self.minus.parts) + [self.center] + list(reversed(self.plus.parts))

    def to_dict(self):
        return {'minus': list(self.minus.parts), 'c': self.center, 'plus': list(self.plus.parts)}

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(',', ':'))

    def __eq__(self, other):
        return (isinstance(other, ConcaveComposition)
                and (self.minus, self.center, self.plus) == (other.minus, other.center, other.plus))

    def __hash__(self):
        return hash((self.minus, self.center, self.plus))

    def __repr__(self):
        return f"ConcaveComposition(minus={list(self.minus.parts)}, c={self.center}, plus={list(self.plus.parts)})"


class SeriesPoly():
    """
    SeriesPoly is a power series in q with integer coefficients, exact modulo q^(n_max+1).
    """

    def __init__(self, coeffs, n_max):
        coeffs = list(coeffs)[:n_max + 1]
        coeffs.extend([0] * (n_max + 1 - len(coeffs)))
        self.coeffs = coeffs
        self.n_max = n_max

    @classmethod
    def one(cls, n_max):
        return cls([1], n_max)

    def copy(self):
        return SeriesPoly(self.coeffs, self.n_max)

    def coeff(self, n):
        return self.coeffs[n] if 0 <= n <= self.n_max else 0

    def divide_one_minus_q_power(self, k):
        """Multiply in place by 1/(1 - q^k), i.e. a prefix sum with stride k."""
        c = self.coeffs
        for m in range(k, self.n_max + 1):
            c[m] += c[m - k]
        return self

    def multiply_one_minus_q_power(self, k):
        """Multiply in place by (1 - q^k)."""
        c = self.coeffs
        for m in range(self.n_max, k - 1, -1):
            c[m] -= c[m - k]
        return self

    def __mul__(self, other):
        n_max = min(self.n_max, other.n_max)
        a, b = self.coeffs, other.coeffs
        out = [0] * (n_max + 1)
        for i in range(n_max + 1):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n_max + 1 - i):
                out[i + j] += ai * b[j]
        return SeriesPoly(out, n_max)

    def square(self):
        return self * self

    def __eq__(self, other):
        return isinstance(other, SeriesPoly) and self.n_max == other.n_max and self.coeffs == other.coeffs


class CountTable():
    """
    CountTable holds exact p(n), p2(n) and V(n) for n = 0..n_max.
    A column that has not been computed yet is None.
    """

    def __init__(self, n_max, p=None, p2=None, v=None):
        self.n_max = n_max
        self.p = p
        self.p2 = p2
        self.v = v

    def require(self, column, n):
        values = getattr(self, column)
        if values is None or n > self.n_max:
            raise ResourceLimitError(
                f"count table column {column} is not available up to n={n} (n_max={self.n_max})")
        return values[n]

    def to_dict(self):
        def encode(values):
            return None if values is None else [str(v) for v in values]
        return {'n_max': self.n_max, 'p': encode(self.p), 'p2': encode(self.p2), 'v': encode(self.v)}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        def decode(values):
            return None if values is None else [int(v) for v in values]
        return cls(int(data['n_max']), decode(data.get('p')), decode(data.get('p2')), decode(data.get('v')))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def check_table_limit(n_max, limit=MAX_TABLE_N):
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    if n_max > limit:
        raise ResourceLimitError(
            f"n_max={n_max} exceeds the configured table budget of {limit}")


def check_table_size(table, n_max):
    if table is not None and table.n_max != n_max:
        raise DomainError(f"table holds n_max={table.n_max}, cannot fill columns up to n_max={n_max}")


def partition_counts(n_max, table=None, limit=MAX_TABLE_N):
    """
    partition_counts fills p(n) for n <= n_max from the Euler product prod (1 - q^k)^-1.
    :param n_max: largest n to compute
    :param table: optional CountTable to fill in place
    :return: CountTable with the p column filled
    """
    check_table_limit(n_max, limit)
    check_table_size(table, n_max)
    series = SeriesPoly.one(n_max)
    for k in range(1, n_max + 1):
        series.divide_one_minus_q_power(k)
    if table is None:
        table = CountTable(n_max)
    table.p = series.coeffs
    return table


def pair_counts(n_max, table=None, limit=MAX_TABLE_N):
    """
    pair_counts fills p2(n) = sum_k p(k) p(n-k), the number of pairs of partitions of total size n.
    The p column is computed first when missing.
    """
    check_table_size(table, n_max)
    if table is None or table.p is None:
        table = partition_counts(n_max, table, limit)
    p = table.p
    p2 = []
    for n in range(n_max + 1):
        acc = 0
        for k in range(n // 2 + 1):
            term = p[k] * p[n - k]
            acc += term if 2 * k == n else 2 * term
        p2.append(acc)
    table.p2 = p2
    return table


def concave_counts(n_max, table=None, limit=MAX_TABLE_N):
    """
    concave_counts fills V(n) = sum_c [q^n] q^c prod_{k>c} (1 - q^k)^-2.
    The central part c is swept from n_max down to 0; at each step the running
    series gains the factor (1 - q^(c+1))^-2 and its shifted copy is added in.
    """
    check_table_limit(n_max, limit)
    check_table_size(table, n_max)
    if table is None:
        table = CountTable(n_max)
    series = SeriesPoly.one(n_max)
    v = [0] * (n_max + 1)
    for c in range(n_max, -1, -1):
        if c < n_max:
            series.divide_one_minus_q_power(c + 1)
            series.divide_one_minus_q_power(c + 1)
        coeffs = series.coeffs
        for m in range(c, n_max + 1):
            v[m] += coeffs[m - c]
    # n = 0 has no concave compositions
    v[0] = 0
    table.v = v
    return table


def count_table(n_max, limit=MAX_TABLE_N):
    """count_table builds a CountTable with every column filled."""
    table = pair_counts(n_max, limit=limit)
    return concave_counts(n_max, table, limit)


def pentagonal_partition_counts(n_max):
    """
    pentagonal_partition_counts computes p(n) with Euler's pentagonal number recurrence,
    independently of the product expansion used by partition_counts.
    """
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 == 1 else -1
            acc += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                acc += sign * p[n - g2]
            k += 1
        p[n] = acc
    return p


def partitions_with_min_part(m, min_part=1, max_part=None):
    """
    Yield every partition of m whose parts are >= min_part (and <= max_part),
    as non-increasing tuples in reverse lexicographic order.
    """
    if max_part is None or max_part > m:
        max_part = m
    if m == 0:
        yield ()
        return
    for first in range(max_part, min_part - 1, -1):
        for rest in partitions_with_min_part(m - first, min_part, first):
            yield (first,) + rest


def colex_key(partition):
    return tuple(reversed(partition.parts))


def enumerate_concave(n, bound=DEFAULT_ENUM_BOUND):
    """
    enumerate_concave lists every concave composition of n exactly once, ordered by
    increasing central part, then colex on minus, then colex on plus.
    n = 0 yields no compositions.
    """
    if n > bound:
        raise BoundExceededError(f"enumeration of n={n} exceeds the bound {bound}")
    if n <= 0:
        return []
    result = []
    for c in range(n + 1):
        rest = n - c
        group = []
        for size_minus in range(rest + 1):
            minus_parts = [Partition(p) for p in partitions_with_min_part(size_minus, c + 1)]
            plus_parts = [Partition(p) for p in partitions_with_min_part(rest - size_minus, c + 1)]
            for minus in minus_parts:
                for plus in plus_parts:
                    group.append(ConcaveComposition(minus, c, plus))
        group.sort(key=lambda comp: (colex_key(comp.minus), colex_key(comp.plus)))
        result.extend(group)
    return result


def enumerate_pairs(n):
    """enumerate_pairs lists every pair (minus, plus) of partitions with total size n."""
    pairs = []
    for size_minus in range(n + 1):
        for minus in partitions_with_min_part(size_minus):
            for plus in partitions_with_min_part(n - size_minus):
                pairs.append((Partition(minus), Partition(plus)))
    return pairs


def log_qpochhammer(z, q, tol=DEFAULT_POCHHAMMER_TOL):
    """
    log_qpochhammer returns ln (z; q)_inf, or -inf when a factor vanishes.
    Factors are accumulated until the log tail bound |z| q^J / ((1 - q)(1 - |z| q^J)) drops below tol.
    """
    if not 0 < q < 1:
        raise NonConvergenceError(f"q must lie in (0, 1), got {q}")
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    terms = []
    term = float(z)
    while True:
        factor = 1.0 - term
        if factor == 0.0:
            return -math.inf
        if factor < 0.0:
            raise NonConvergenceError(
                f"factor 1 - z q^j = {factor} is negative for z={z}, q={q}; the log bound does not apply")
        if term != 0.0:
            terms.append(math.log1p(-term))
        mag = abs(term)
        if mag < 1.0 and mag / ((1.0 - q) * (1.0 - mag)) < tol:
            break
        term *= q
    return math.fsum(terms)


def qpochhammer(z, q, tol=DEFAULT_POCHHAMMER_TOL):
    """qpochhammer evaluates (z; q)_inf = prod_{j>=0} (1 - z q^j) to relative accuracy tol."""
    log_value = log_qpochhammer(z, q, tol)
    if log_value == -math.inf:
        return 0.0
    return math.exp(log_value)


def log_vn_asymptotic(n):
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 0.5 * math.log(6) - 1.25 * math.log(12 * n) + math.pi * math.sqrt(12 * n) / 3


def vn_asymptotic(n):
    """
    vn_asymptotic is the leading term sqrt(6) (12n)^(-5/4) exp(pi sqrt(12n) / 3) of V(n).
    The value is an mpmath mpf so it does not overflow for large n.
    """
    return mpmath.exp(mpmath.mpf(log_vn_asymptotic(n)))


# p2(n) has the same leading term as V(n)
p2_asymptotic = vn_asymptotic


def log_pn_asymptotic(n):
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return math.pi * math.sqrt(2 * n / 3) - math.log(4 * n * math.sqrt(3))


def pn_asymptotic(n):
    """pn_asymptotic is the Hardy-Ramanujan leading term exp(pi sqrt(2n/3)) / (4 n sqrt 3)."""
    return mpmath.exp(mpmath.mpf(log_pn_asymptotic(n)))


_ASYMPTOTICS = {
    'p': pn_asymptotic,
    'p2': p2_asymptotic,
    'v': vn_asymptotic,
}


def asymptotic_ratio(table, n, which='v'):
    """asymptotic_ratio returns the exact count divided by its leading asymptotic term."""
    if which not in _ASYMPTOTICS:
        raise DomainError(f"unknown count {which}, expecting one of {sorted(_ASYMPTOTICS)}")
    exact = table.require(which, n)
    return float(mpmath.mpf(exact) / _ASYMPTOTICS[which](n))


def central_part_zero_probability(n, table):
    """central_part_zero_probability is the exact fraction p2(n) / V(n) of compositions with c = 0."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return float(Fraction(table.require('p2', n), table.require('v', n)))


def is_log_concave(table, n):
    """is_log_concave checks p(n)^2 > p(n-1) p(n+1)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return table.require('p', n) ** 2 > table.require('p', n - 1) * table.require('p', n + 1)
