from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import math
import traceback
from dataclasses import dataclass

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    BudgetExceededError,
    DomainError,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import (
    Partition,
    log_qpochhammer,
)

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}

DEFAULT_TAIL_EPS = 1e-12
DEFAULT_UNIFORM_MAX_N = 10000
DEFAULT_SEED = 20240901
# float cells drawn per block, keeps a block under ~32MB
BLOCK_CELLS = 4000000


@dataclass(frozen=True)
class RngSeed:
    """
    RngSeed names one reproducible random stream.
    Streams are derived with numpy's SeedSequence: entropy is the seed and the
    spawn key is (stream,) or (stream, chunk) for per-chunk substreams, so a
    batch split into chunks draws the same numbers regardless of worker count.
    """
    seed: int = DEFAULT_SEED
    stream: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream < 0:
            raise DomainError(f"seed and stream must be non-negative, got seed={self.seed} stream={self.stream}")

    def generator(self, chunk=None):
        spawn_key = (self.stream,) if chunk is None else (self.stream, chunk)
        return np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(entropy=self.seed, spawn_key=spawn_key)))


@dataclass(frozen=True)
class BoltzmannParams:
    n: int
    q: float
    tail_eps: float
    k_max: int
    sides: int = 2

    @property
    def log_q(self):
        return math.log(self.q)


@dataclass(frozen=True)
class SizeMoments:
    mean: float
    variance: float
    tail_bound: float = 0.0


def _tuning(n, sides):
    # sides=2 gives q_n = exp(-pi / sqrt(3n)); sides=1 the single partition exp(-pi / sqrt(6n))
    return math.exp(-math.pi / math.sqrt(6 * n / sides))


def _tail_terms(q, sides, k_hi):
    ks = np.arange(1, k_hi + 1, dtype=np.float64)
    log_qk = ks * math.log(q)
    return sides * np.exp(log_qk) / -np.expm1(log_qk)


def _k_max(q, sides, tail_eps):
    # beyond k_hi the closed-form bound sides * q^(k+1) / (1 - q)^2 is below tail_eps / 4
    k_hi = max(1, int(math.ceil(math.log(tail_eps * (1 - q) ** 2 / (4 * sides)) / math.log(q))))
    remainder = sides * q ** (k_hi + 1) / (1 - q) ** 2
    terms = _tail_terms(q, sides, k_hi)
    # suffix[K] = sum_{k > K} terms, K = 0..k_hi
    suffix = np.append(np.cumsum(terms[::-1])[::-1], 0.0) + remainder
    return max(1, int(np.argmax(suffix < tail_eps)))


def make_params(n, tail_eps=DEFAULT_TAIL_EPS, sides=2):
    """
    make_params tunes the Boltzmann measure for target size n.
    k_max is the least K with sum_{k>K} sides * q^k / (1 - q^k) < tail_eps; this sum bounds the
    probability that any frequency beyond K is nonzero, so the truncated product measure is within
    tail_eps of the untruncated one in total variation.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 < tail_eps < 1:
        raise DomainError(f"tail_eps must lie in (0, 1), got {tail_eps}")
    q = _tuning(n, sides)
    return BoltzmannParams(n=n, q=q, tail_eps=tail_eps, k_max=_k_max(q, sides, tail_eps), sides=sides)


def make_partition_params(n, tail_eps=DEFAULT_TAIL_EPS):
    """make_partition_params tunes a single-partition Boltzmann measure, q = exp(-pi / sqrt(6n))."""
    return make_params(n, tail_eps, sides=1)


def size_moments(params):
    """
    size_moments sums the mean and variance of N = sum k (X_k^+ + X_k^-) up to k_max:
    mean = sum sides k q^k / (1 - q^k), variance = sum sides k^2 q^k / (1 - q^k)^2.
    """
    ks = np.arange(1, params.k_max + 1, dtype=np.float64)
    log_qk = ks * params.log_q
    qk = np.exp(log_qk)
    one_minus = -np.expm1(log_qk)
    mean = math.fsum(params.sides * ks * qk / one_minus)
    variance = math.fsum(params.sides * ks ** 2 * qk / one_minus ** 2)
    return SizeMoments(mean=mean, variance=variance, tail_bound=params.tail_eps * params.n)


class FrequencyVector():
    """
    FrequencyVector is the sparse map k -> (x_plus, x_minus); zero entries are omitted.
    """

    __slots__ = ('entries',)

    def __init__(self, entries=None):
        self.entries = {}
        for k, (x_plus, x_minus) in (entries or {}).items():
            if x_plus < 0 or x_minus < 0:
                raise DomainError(f"negative frequency at k={k}: {(x_plus, x_minus)}")
            if x_plus or x_minus:
                self.entries[int(k)] = (int(x_plus), int(x_minus))

    @classmethod
    def from_arrays(cls, x_plus, x_minus):
        nonzero = np.flatnonzero((x_plus > 0) | (x_minus > 0))
        return cls({int(i) + 1: (int(x_plus[i]), int(x_minus[i])) for i in nonzero})

    @property
    def size(self):
        return sum(k * (xp + xm) for k, (xp, xm) in self.entries.items())

    def side(self, which):
        index = 0 if which == 'plus' else 1
        return {k: pair[index] for k, pair in self.entries.items() if pair[index]}

    def to_dict(self):
        return {str(k): [xp, xm] for k, (xp, xm) in sorted(self.entries.items())}

    def __eq__(self, other):
        return isinstance(other, FrequencyVector) and self.entries == other.entries

    def __repr__(self):
        return f"FrequencyVector({self.to_dict()})"


def frequencies_to_partitions(frequencies):
    """frequencies_to_partitions expands a FrequencyVector into (minus, plus)."""
    return (Partition.from_frequencies(frequencies.side('minus')),
            Partition.from_frequencies(frequencies.side('plus')))


def partitions_to_frequencies(minus, plus):
    entries = {}
    for k, count in plus.frequencies().items():
        entries[k] = (count, 0)
    for k, count in minus.frequencies().items():
        entries[k] = (entries.get(k, (0, 0))[0], count)
    return FrequencyVector(entries)


def _draw(params, gen, size, k_cut=None):
    """
    _draw returns an int64 array (size, sides, k_cut) of independent geometric frequencies,
    P(X_k = j) = q^(kj) (1 - q^k), by inverse CDF: X_k = floor(ln(1 - U) / (k ln q)).
    """
    k_cut = params.k_max if k_cut is None else k_cut
    scale = np.arange(1, k_cut + 1, dtype=np.float64) * params.log_q
    u = gen.random((size, params.sides, k_cut))
    return np.floor(np.log1p(-u) / scale).astype(np.int64)


def sample_boltzmann(params, gen):
    """sample_boltzmann draws one FrequencyVector under the truncated Boltzmann measure."""
    x = _draw(params, gen, 1)[0]
    if params.sides == 1:
        return FrequencyVector.from_arrays(x[0], np.zeros_like(x[0]))
    return FrequencyVector.from_arrays(x[0], x[1])


def sample_partition(params, gen):
    """sample_partition draws one partition under a single-partition Boltzmann measure."""
    x = _draw(params, gen, 1)[0][0]
    return Partition.from_frequencies({int(i) + 1: int(x[i]) for i in np.flatnonzero(x)})


def _block_size(params, k_cut, wanted):
    cap = max(1, BLOCK_CELLS // (params.sides * max(k_cut, 1)))
    return int(min(max(wanted, 1), cap))


def batch_statistics(x):
    """
    batch_statistics reduces a frequency block (size, sides, k) to per-sample arrays:
    size, len_plus, len_minus, largest_plus, largest_minus.
    """
    ks = np.arange(1, x.shape[2] + 1, dtype=np.int64)
    sizes = (x * ks).sum(axis=(1, 2))
    lengths = x.sum(axis=2)
    largest = ((x > 0) * ks).max(axis=2)
    minus = 1 if x.shape[1] > 1 else 0
    return {
        'size': sizes,
        'len_plus': lengths[:, 0],
        'len_minus': lengths[:, minus] if minus else np.zeros_like(sizes),
        'largest_plus': largest[:, 0],
        'largest_minus': largest[:, minus] if minus else np.zeros_like(sizes),
    }


def sample_boltzmann_batch(params, gen, m):
    """
    sample_boltzmann_batch draws m Boltzmann samples and keeps only their statistics,
    which is what the large-n experiments need.
    """
    if m < 1:
        raise DomainError(f"sample count must be >= 1, got {m}")
    block = _block_size(params, params.k_max, m)
    parts = []
    done = 0
    while done < m:
        size = min(block, m - done)
        parts.append(batch_statistics(_draw(params, gen, size)))
        done += size
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def local_limit_exact(n, table):
    """
    local_limit_exact is Q_{q_n}(N = n) = p2(n) q_n^n prod_k (1 - q_n^k)^2, evaluated in log space.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    q = _tuning(n, 2)
    log_value = math.log(table.require('p2', n)) + n * math.log(q) + 2 * log_qpochhammer(q, q)
    return math.exp(log_value)


@dataclass(frozen=True)
class LocalLimitReport:
    n: int
    exact: float
    candidate_48: float
    candidate_96: float

    @property
    def ratio_48(self):
        return self.exact / self.candidate_48

    @property
    def ratio_96(self):
        return self.exact / self.candidate_96

    def closest(self):
        return '48' if abs(self.ratio_48 - 1) <= abs(self.ratio_96 - 1) else '96'

    def to_dict(self):
        return {
            'n': self.n,
            'exact': self.exact,
            'candidate_48': self.candidate_48,
            'candidate_96': self.candidate_96,
            'ratio_48': self.ratio_48,
            'ratio_96': self.ratio_96,
            'closest': self.closest(),
        }


def local_limit_report(n, table):
    """local_limit_report sets the exact Q(N = n) beside 1/(48 n^3)^(1/4) and 1/(96 n^3)^(1/4)."""
    return LocalLimitReport(
        n=n,
        exact=local_limit_exact(n, table),
        candidate_48=(48 * n ** 3) ** -0.25,
        candidate_96=(96 * n ** 3) ** -0.25,
    )


def default_rejection_budget(n):
    return int(math.ceil(100 * (48 * n ** 3) ** 0.25))


def iter_uniform_pairs(n, gen, budget=None, max_n=DEFAULT_UNIFORM_MAX_N):
    """
    iter_uniform_pairs yields (minus, plus, trials) forever, each pair uniform over the p2(n)
    pairs of partitions with total size n, by rejecting Boltzmann draws with N != n.
    Frequencies above n can only push N past n, so they are folded into one Bernoulli draw
    with the exact probability 1 - prod_{k>n} (1 - q^k)^2; trial counts therefore match the
    untruncated rejection sampler.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > max_n:
        raise BudgetExceededError(
            f"uniform sampling of n={n} exceeds the configured maximum n={max_n}; "
            "use Boltzmann sampling explicitly for large n", trials=0)
    if budget is None:
        budget = default_rejection_budget(n)
    q = _tuning(n, 2)
    params = BoltzmannParams(n=n, q=q, tail_eps=0.0, k_max=n)
    p_overflow = -math.expm1(2 * log_qpochhammer(q ** (n + 1), q))
    expected = (48 * n ** 3) ** 0.25
    block = _block_size(params, n, 1 << max(6, int(math.ceil(math.log2(expected)))))
    ks = np.arange(1, n + 1, dtype=np.int64)
    trials = 0
    while True:
        x = _draw(params, gen, block)
        overflow = gen.random(block) < p_overflow
        accepted = np.flatnonzero(((x * ks).sum(axis=(1, 2)) == n) & ~overflow)
        last = -1
        for index in accepted:
            index = int(index)
            gap = trials + index - last
            if gap > budget:
                raise BudgetExceededError(
                    f"rejection budget of {budget} trials exhausted for n={n}", trials=budget)
            minus = Partition.from_frequencies({int(k) + 1: int(x[index, 1, k]) for k in np.flatnonzero(x[index, 1])})
            plus = Partition.from_frequencies({int(k) + 1: int(x[index, 0, k]) for k in np.flatnonzero(x[index, 0])})
            yield minus, plus, gap
            trials = 0
            last = index
        trials += block - 1 - last
        if trials > budget:
            raise BudgetExceededError(
                f"rejection budget of {budget} trials exhausted for n={n}", trials=trials)


def sample_uniform_pair(n, gen, budget=None, max_n=DEFAULT_UNIFORM_MAX_N):
    """sample_uniform_pair returns one uniform (minus, plus) pair of total size n and the trials it took."""
    return next(iter_uniform_pairs(n, gen, budget, max_n))


def exact_length_pmf(q, a):
    """exact_length_pmf is Q_q(l(lambda) = a) = q^a (q^(a+1); q)_inf for one side."""
    if a < 0:
        return 0.0
    return math.exp(a * math.log(q) + log_qpochhammer(q ** (a + 1), q))


def exact_length_cdf(q, i):
    """exact_length_cdf is Q_q(l(lambda) <= i) = (q^(i+1); q)_inf for one side."""
    if i < 0:
        return 0.0
    return math.exp(log_qpochhammer(q ** (i + 1), q))


def exact_length_cdf_array(q, points):
    """
    exact_length_cdf_array evaluates exact_length_cdf at many integer points from one
    suffix sum of ln(1 - q^k), so a whole range of lengths costs one pass over k.
    """
    points = np.asarray(points, dtype=np.int64)
    top = int(points.max()) + 1 if points.size else 1
    # past k_hi every q^k / (1 - q) is below double precision
    k_hi = max(top, int(math.ceil(math.log(1e-17 * (1 - q)) / math.log(q))))
    logs = np.log1p(-np.exp(np.arange(1, k_hi + 1, dtype=np.float64) * math.log(q)))
    # suffix[i] = sum_{k > i} ln(1 - q^k), i = 0..k_hi
    suffix = np.append(np.cumsum(logs[::-1])[::-1], 0.0)
    values = np.exp(suffix[np.clip(points, 0, k_hi)])
    return np.where(points < 0, 0.0, values)


def sample_boltzmann_chunk(params, count, gen):
    """sample_boltzmann_chunk draws count FrequencyVectors one after another from gen."""
    return [sample_boltzmann(params, gen) for _ in range(count)]


def sample_partition_chunk(params, count, gen):
    return [sample_partition(params, gen) for _ in range(count)]
