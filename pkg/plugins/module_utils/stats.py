from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import json
import math
import traceback
from dataclasses import dataclass

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    DomainError,
    EmptySampleError,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import Partition

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}
try:
    from scipy.stats import chi2
except ImportError as e:
    IMP_ERR['scipy'] = {'error': traceback.format_exc(),
                        'exception': e}


@dataclass(frozen=True)
class StatSummary:
    """
    StatSummary holds the statistics of one concave composition.
    tilt follows l(plus) - l(minus); normalize_tilt takes the opposite difference explicitly.
    """
    len_minus: int
    len_plus: int
    length: int
    tilt: int
    largest_part: int
    half_perimeter: int
    size_minus: int
    size_plus: int
    center: int = 0

    @property
    def total(self):
        return self.size_minus + self.center + self.size_plus

    def to_dict(self):
        return {
            'len_minus': self.len_minus,
            'len_plus': self.len_plus,
            'length': self.length,
            'tilt': self.tilt,
            'largest_part': self.largest_part,
            'half_perimeter': self.half_perimeter,
            'size_minus': self.size_minus,
            'size_plus': self.size_plus,
            'c': self.center,
        }


def _summary(len_minus, len_plus, largest, size_minus, size_plus, center):
    length = len_minus + len_plus + 1
    return StatSummary(
        len_minus=len_minus,
        len_plus=len_plus,
        length=length,
        tilt=len_plus - len_minus,
        largest_part=largest,
        half_perimeter=length + largest,
        size_minus=size_minus,
        size_plus=size_plus,
        center=center,
    )


def summarize(comp):
    """
    summarize computes length, tilt and half-perimeter of a composition.
    The largest part is taken over both sides only, so an empty side contributes 0.
    """
    return _summary(comp.minus.length, comp.plus.length,
                    max(comp.minus.largest, comp.plus.largest),
                    comp.minus.size, comp.plus.size, comp.center)


def summarize_frequencies(frequencies):
    """summarize_frequencies is summarize for a sampled FrequencyVector (central part 0)."""
    len_plus = len_minus = size_plus = size_minus = largest = 0
    for k, (x_plus, x_minus) in frequencies.entries.items():
        len_plus += x_plus
        len_minus += x_minus
        size_plus += k * x_plus
        size_minus += k * x_minus
        largest = max(largest, k)
    return _summary(len_minus, len_plus, largest, size_minus, size_plus, 0)


def conjugate(partition):
    """conjugate returns the Euler conjugate: largest part and length swap."""
    parts = partition.parts
    return Partition([sum(1 for p in parts if p > i) for i in range(partition.largest)])


def _scale(n):
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return math.sqrt(3 * n) / math.pi


def normalize_perimeter(length, n):
    """normalize_perimeter inverts f_n(x) = s x + s ln s with s = sqrt(3n) / pi."""
    s = _scale(n)
    return length / s - math.log(s)


def normalize_tilt(t, n):
    """normalize_tilt rescales t = l(minus) - l(plus) by pi / sqrt(3n)."""
    return t / _scale(n)


def normalize_length_sum(length, n):
    """
    normalize_length_sum centres l(minus) + l(plus) at twice the one-sided location:
    x = pi l / sqrt(3n) - 2 ln(sqrt(3n) / pi).
    """
    s = _scale(n)
    return length / s - 2 * math.log(s)


class EmpiricalCDF():
    """
    EmpiricalCDF is the right-continuous step function of a sample.
    """

    def __init__(self, samples):
        values = np.sort(np.asarray(samples, dtype=np.float64).ravel())
        if values.size == 0:
            raise EmptySampleError("cannot build an empirical CDF from an empty sample")
        self.values = values
        self.n_samples = int(values.size)

    def __call__(self, x):
        return np.searchsorted(self.values, x, side='right') / self.n_samples

    def left_limit(self, x):
        return np.searchsorted(self.values, x, side='left') / self.n_samples


def ecdf(samples):
    return EmpiricalCDF(samples)


@dataclass(frozen=True)
class GoFReport:
    test: str
    statistic: float
    n_samples: int
    threshold: float
    passed: bool
    detail: dict = None

    def to_dict(self):
        result = {
            'test': self.test,
            'statistic': self.statistic,
            'n': self.n_samples,
            'threshold': self.threshold,
            'pass': self.passed,
        }
        if self.detail:
            result['detail'] = self.detail
        return result

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def make_report(test, statistic, n_samples, threshold, detail=None):
    statistic = float(statistic)
    return GoFReport(test=test, statistic=statistic, n_samples=int(n_samples),
                     threshold=float(threshold), passed=bool(statistic <= threshold), detail=detail)


def ks_statistic(e, cdf):
    """
    ks_statistic is sup_x |E(x) - F(x)|, evaluated at the jump points of E from both sides.
    """
    points = np.unique(e.values)
    f = np.asarray(cdf(points), dtype=np.float64)
    upper = e(points) - f
    lower = f - e.left_limit(points)
    return float(max(upper.max(), lower.max(), 0.0))


def ks_distance(e, cdf, threshold=1.0, test='ks'):
    """ks_distance compares an EmpiricalCDF against a CDF and reports against a fixed threshold."""
    return make_report(test, ks_statistic(e, cdf), e.n_samples, threshold)


def chi_square_threshold(categories, alpha):
    """chi_square_threshold is the upper alpha quantile of chi-square with categories - 1 degrees of freedom."""
    return float(chi2.isf(alpha, categories - 1))


def chi_square(observed, expected_probabilities, threshold=None, alpha=1e-3, test='chi-square'):
    """
    chi_square computes sum (O - E)^2 / E with E = m * probability.
    Without an explicit threshold the alpha quantile of the chi-square law is used.
    """
    observed = np.asarray(observed, dtype=np.float64)
    probabilities = np.asarray(expected_probabilities, dtype=np.float64)
    if observed.size == 0 or observed.sum() == 0:
        raise EmptySampleError("chi-square needs at least one observation")
    if observed.shape != probabilities.shape:
        raise DomainError(
            f"observed counts {observed.shape} and probabilities {probabilities.shape} differ in shape")
    m = observed.sum()
    expected = probabilities * m
    statistic = float(((observed - expected) ** 2 / expected).sum())
    if threshold is None:
        threshold = chi_square_threshold(observed.size, alpha)
    return make_report(test, statistic, m, threshold)


def max_deviation(empirical, reference, n_samples, threshold, test='max-deviation', detail=None):
    """max_deviation reports the largest absolute gap between two arrays evaluated on the same grid."""
    gap = np.abs(np.asarray(empirical, dtype=np.float64) - np.asarray(reference, dtype=np.float64))
    return make_report(test, gap.max() if gap.size else 0.0, n_samples, threshold, detail)
