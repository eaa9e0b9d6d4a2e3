from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import json
import math
import unittest

import numpy as np

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import DomainError, EmptySampleError
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import ConcaveComposition, Partition
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    FrequencyVector,
    RngSeed,
    frequencies_to_partitions,
    make_params,
    sample_boltzmann_batch,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    chi_square,
    chi_square_threshold,
    conjugate,
    ecdf,
    ks_distance,
    max_deviation,
    normalize_length_sum,
    normalize_perimeter,
    normalize_tilt,
    summarize,
    summarize_frequencies,
)


class TestSummarize(unittest.TestCase):
    def test_composition_of_54(self):
        comp = ConcaveComposition.from_sequence([8, 6, 6, 3, 2, 1, 1, 1, 0, 1, 1, 1, 2, 5, 5, 5, 6])
        s = summarize(comp)
        assert s.len_minus == 8
        assert s.len_plus == 8
        assert s.length == 17
        assert s.tilt == 0
        assert s.largest_part == 8
        assert s.half_perimeter == 25
        assert s.total == 54

    def test_only_center(self):
        s = summarize(ConcaveComposition([], 3, []))
        assert s.length == 1
        assert s.largest_part == 0
        assert s.to_dict()['c'] == 3

    def test_frequencies_match_partitions(self):
        f = FrequencyVector({1: (3, 1), 2: (0, 2), 7: (1, 0)})
        minus, plus = frequencies_to_partitions(f)
        assert summarize_frequencies(f) == summarize(ConcaveComposition(minus, 0, plus))


class TestConjugate(unittest.TestCase):
    def test_conjugate(self):
        assert conjugate(Partition([4, 2, 1])) == Partition([3, 2, 1, 1])
        assert conjugate(Partition()) == Partition()

    def test_half_perimeter_is_conjugation_invariant(self):
        p = Partition([6, 4, 4, 1])
        c = conjugate(p)
        assert c.size == p.size
        assert c.length + c.largest == p.length + p.largest
        assert conjugate(c) == p


class TestNormalize(unittest.TestCase):
    def test_perimeter_inverts_scaling(self):
        n = 10 ** 6
        s = math.sqrt(3 * n) / math.pi
        for x in (-1.0, 0.0, 2.5):
            length = s * x + s * math.log(s)
            assert abs(normalize_perimeter(length, n) - x) < 1e-9

    def test_tilt(self):
        n = 3000
        assert normalize_tilt(0, n) == 0.0
        assert abs(normalize_tilt(30, n) - 30 * math.pi / math.sqrt(9000)) < 1e-12

    def test_length_sum_centering(self):
        n = 12345
        s = math.sqrt(3 * n) / math.pi
        assert abs(normalize_length_sum(2 * s * math.log(s), n)) < 1e-9

    def test_length_sum_mean(self):
        n = 10000
        batch = sample_boltzmann_batch(make_params(n), RngSeed(seed=6).generator(), 4000)
        values = normalize_length_sum(batch['len_minus'] + batch['len_plus'], n)
        # sum of two standard Gumbels
        assert abs(values.mean() - 2 * np.euler_gamma) < 0.15

    def test_arrays(self):
        values = normalize_perimeter(np.array([10, 20, 30]), 100)
        assert values.shape == (3,)
        assert np.all(np.diff(values) > 0)

    def test_invalid_n(self):
        with self.assertRaises(DomainError):
            normalize_perimeter(3, 0)


class TestEmpiricalCDF(unittest.TestCase):
    def test_steps(self):
        e = ecdf([3.0, 1.0, 2.0, 2.0])
        assert e(0.5) == 0.0
        assert e(2.0) == 0.75
        assert e.left_limit(2.0) == 0.25
        assert e(10.0) == 1.0

    def test_empty(self):
        with self.assertRaises(EmptySampleError):
            ecdf([])

    def test_single_point_ks(self):
        report = ks_distance(ecdf([0.5]), lambda x: np.clip(x, 0.0, 1.0), threshold=0.6)
        assert abs(report.statistic - 0.5) < 1e-15
        assert report.passed
        assert report.n_samples == 1

    def test_invariant_under_increasing_map(self):
        gen = np.random.Generator(np.random.PCG64(7))
        xs = gen.gumbel(size=500)
        report = ks_distance(ecdf(xs), lambda x: np.exp(-np.exp(-x)))
        mapped = ks_distance(ecdf(np.exp(xs / 2)), lambda y: np.exp(-np.exp(-2 * np.log(y))))
        assert abs(report.statistic - mapped.statistic) < 1e-9

    def test_uniform_sample(self):
        gen = np.random.Generator(np.random.PCG64(4))
        report = ks_distance(ecdf(gen.random(5000)), lambda x: np.clip(x, 0.0, 1.0), threshold=0.03)
        assert report.passed
        assert set(report.to_dict()) == {'test', 'statistic', 'n', 'threshold', 'pass'}
        assert json.loads(report.to_json())['test'] == 'ks'


class TestChiSquare(unittest.TestCase):
    def test_exact_match(self):
        report = chi_square([25, 25, 50], [0.25, 0.25, 0.5])
        assert report.statistic == 0.0
        assert report.passed
        assert report.threshold == chi_square_threshold(3, 1e-3)

    def test_rejects_skewed_counts(self):
        report = chi_square([900, 100], [0.5, 0.5])
        assert not report.passed

    def test_shape_mismatch(self):
        with self.assertRaises(DomainError):
            chi_square([1, 2], [1.0])

    def test_empty(self):
        with self.assertRaises(EmptySampleError):
            chi_square([0, 0], [0.5, 0.5])


class TestMaxDeviation(unittest.TestCase):
    def test_max_deviation(self):
        report = max_deviation([0.1, 0.5], [0.1, 0.45], 100, 0.1)
        assert abs(report.statistic - 0.05) < 1e-12
        assert report.passed
