from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import itertools
import math
import unittest

import numpy as np

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    BudgetExceededError,
    DomainError,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import (
    Partition,
    enumerate_pairs,
    log_qpochhammer,
    pair_counts,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    BoltzmannParams,
    FrequencyVector,
    RngSeed,
    exact_length_cdf,
    exact_length_cdf_array,
    exact_length_pmf,
    frequencies_to_partitions,
    iter_uniform_pairs,
    local_limit_exact,
    local_limit_report,
    make_params,
    make_partition_params,
    partitions_to_frequencies,
    sample_boltzmann,
    sample_boltzmann_batch,
    sample_partition,
    size_moments,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import chi_square


def divisor_sum(m):
    return sum(d for d in range(1, m + 1) if m % d == 0)


class TestParams(unittest.TestCase):
    def test_tuning(self):
        params = make_params(1000)
        assert params.q == math.exp(-math.pi / math.sqrt(3000))
        assert params.k_max > 1

    def test_partition_tuning(self):
        params = make_partition_params(1000)
        assert abs(params.q - math.exp(-math.pi / math.sqrt(6000))) < 1e-15
        assert params.sides == 1

    def test_k_max_bounds_tail(self):
        params = make_params(500, 1e-9)
        k = np.arange(params.k_max + 1, params.k_max + 200000, dtype=np.float64)
        tail = np.sum(2 * params.q ** k / (1 - params.q ** k))
        assert tail < 1e-9
        k = params.k_max
        assert tail + 2 * params.q ** k / (1 - params.q ** k) >= 0.7e-9

    def test_truncation_is_sound(self):
        n = 60
        params = make_params(n)
        doubled = BoltzmannParams(n=n, q=params.q, tail_eps=params.tail_eps, k_max=2 * params.k_max)
        exact = local_limit_exact(n, pair_counts(n))
        m = 40000
        se = math.sqrt(exact * (1 - exact) / m)
        hits = []
        for seed, p in ((13, params), (14, doubled)):
            sizes = sample_boltzmann_batch(p, RngSeed(seed=seed).generator(), m)['size']
            hits.append(float(np.mean(sizes == n)))
        assert abs(hits[0] - exact) < 4 * se
        assert abs(hits[1] - exact) < 4 * se
        assert abs(hits[0] - hits[1]) < 4 * math.sqrt(2) * se

    def test_invalid(self):
        with self.assertRaises(DomainError):
            make_params(0)
        with self.assertRaises(DomainError):
            make_params(10, 0.0)
        with self.assertRaises(DomainError):
            make_params(10, 1.5)


class TestSizeMoments(unittest.TestCase):
    def test_divisor_sum_oracle(self):
        params = BoltzmannParams(n=1, q=0.5, tail_eps=1e-12, k_max=200)
        moments = size_moments(params)
        mean = 2 * math.fsum(divisor_sum(m) * 0.5 ** m for m in range(1, 200))
        variance = 2 * math.fsum(m * divisor_sum(m) * 0.5 ** m for m in range(1, 200))
        assert abs(moments.mean - mean) < 1e-12
        assert abs(moments.variance - variance) < 1e-10
        assert abs(moments.mean - 5.489) < 0.01

    def test_asymptotic_scales(self):
        n = 10000
        moments = size_moments(make_params(n))
        assert abs(n - moments.mean) / n ** 0.75 < 2
        assert 0.8 <= moments.variance * math.pi / (math.sqrt(12) * n ** 1.5) <= 1.2

    def test_monte_carlo_moments(self):
        params = make_params(100)
        moments = size_moments(params)
        sizes = sample_boltzmann_batch(params, RngSeed(seed=11).generator(), 20000)['size']
        se_mean = math.sqrt(moments.variance / sizes.size)
        assert abs(sizes.mean() - moments.mean) < 4 * se_mean
        se_var = moments.variance * math.sqrt(2.0 / (sizes.size - 1))
        assert abs(sizes.var(ddof=1) - moments.variance) < 4 * se_var


class TestFrequencies(unittest.TestCase):
    def test_partitions_round_trip(self):
        f = FrequencyVector({1: (2, 0), 3: (1, 1), 4: (0, 2)})
        minus, plus = frequencies_to_partitions(f)
        assert minus == Partition([4, 4, 3])
        assert plus == Partition([3, 1, 1])
        assert f.size == 2 + 6 + 8
        assert partitions_to_frequencies(minus, plus) == f

    def test_zero_entries_dropped(self):
        assert FrequencyVector({2: (0, 0)}).entries == {}

    def test_negative_frequency(self):
        with self.assertRaises(DomainError):
            FrequencyVector({1: (-1, 0)})


class TestSampling(unittest.TestCase):
    def test_negative_seed(self):
        with self.assertRaises(DomainError):
            RngSeed(seed=-1)
        with self.assertRaises(DomainError):
            RngSeed(stream=-1)

    def test_deterministic(self):
        params = make_params(300)
        a = sample_boltzmann(params, RngSeed(seed=5).generator())
        b = sample_boltzmann(params, RngSeed(seed=5).generator())
        c = sample_boltzmann(params, RngSeed(seed=5, stream=1).generator())
        assert a == b
        assert a != c

    def test_batch_matches_frequency_statistics(self):
        params = make_params(200)
        batch = sample_boltzmann_batch(params, RngSeed(seed=3).generator(), 5)
        assert set(batch) == {'size', 'len_plus', 'len_minus', 'largest_plus', 'largest_minus'}
        assert all(batch[key].shape == (5,) for key in batch)
        assert np.all(batch['size'] >= batch['len_plus'] + batch['len_minus'])

    def test_batch_size(self):
        with self.assertRaises(DomainError):
            sample_boltzmann_batch(make_params(10), RngSeed().generator(), 0)

    def test_sample_partition(self):
        params = make_partition_params(2000)
        gen = RngSeed(seed=2).generator()
        sizes = [sample_partition(params, gen).size for _ in range(200)]
        assert abs(np.mean(sizes) - 2000) < 300


class TestLocalLimit(unittest.TestCase):
    def test_48_is_closest(self):
        table = pair_counts(1000)
        report = local_limit_report(1000, table)
        assert report.closest() == '48'
        assert abs(report.ratio_48 - 1) < 0.15
        assert abs(report.ratio_96 - 1) > 0.15
        assert report.to_dict()['closest'] == '48'

    def test_measure_sums_to_one(self):
        table = pair_counts(1000)
        q = make_params(50).q
        log_norm = 2 * log_qpochhammer(q, q)
        total = math.fsum(math.exp(math.log(table.p2[n]) + n * math.log(q) + log_norm) for n in range(1001))
        assert abs(total - 1) < 1e-6


class TestUniformPairs(unittest.TestCase):
    def test_chi_square_small_n(self):
        for n in (3, 8):
            pairs = enumerate_pairs(n)
            index = {(m.parts, p.parts): i for i, (m, p) in enumerate(pairs)}
            counts = np.zeros(len(pairs))
            draws = iter_uniform_pairs(n, RngSeed(seed=17, stream=n).generator())
            for minus, plus, trials in itertools.islice(draws, 100000):
                assert minus.size + plus.size == n
                assert trials >= 1
                counts[index[(minus.parts, plus.parts)]] += 1
            report = chi_square(counts, np.full(len(pairs), 1.0 / len(pairs)), alpha=1e-3)
            assert report.passed, report.to_dict()

    def test_single_cell_halves(self):
        draws = iter_uniform_pairs(1, RngSeed(seed=19).generator())
        minus_sides = sum(1 for minus, plus, _ in itertools.islice(draws, 4000) if minus.size == 1)
        assert abs(minus_sides - 2000) < 130

    def test_expected_trials(self):
        n = 500
        expected = 1 / local_limit_exact(n, pair_counts(n))
        draws = iter_uniform_pairs(n, RngSeed(seed=23).generator())
        mean = np.mean([trials for _, _, trials in itertools.islice(draws, 100)])
        assert expected / 2 < mean < 2 * expected

    def test_refuses_large_n(self):
        with self.assertRaises(BudgetExceededError):
            next(iter_uniform_pairs(20001, RngSeed().generator()))

    def test_budget_exhausted(self):
        draws = iter_uniform_pairs(60, RngSeed(seed=1).generator(), budget=1)
        with self.assertRaises(BudgetExceededError) as ctx:
            list(itertools.islice(draws, 50))
        assert ctx.exception.trials >= 1


class TestExactLength(unittest.TestCase):
    def test_pmf_sums_to_cdf(self):
        q = 0.9
        total = math.fsum(exact_length_pmf(q, a) for a in range(31))
        assert abs(total - exact_length_cdf(q, 30)) < 1e-12
        assert exact_length_cdf(q, -1) == 0.0
        assert abs(exact_length_cdf(q, 2000) - 1) < 1e-12

    def test_array_matches_scalar(self):
        q = make_partition_params(400).q
        points = np.arange(-2, 120)
        values = exact_length_cdf_array(q, points)
        for i, value in zip(points, values):
            assert abs(value - exact_length_cdf(q, int(i))) < 1e-12

    def test_matches_sampled_lengths(self):
        params = make_partition_params(400)
        gen = RngSeed(seed=9).generator()
        lengths = np.array([sample_partition(params, gen).length for _ in range(4000)])
        i = int(np.median(lengths))
        empirical = np.mean(lengths <= i)
        assert abs(empirical - exact_length_cdf(params.q, i)) < 0.03
