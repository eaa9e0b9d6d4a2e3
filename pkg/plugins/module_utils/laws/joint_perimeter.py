from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import traceback

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import joint_perimeter_cdf
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    max_deviation,
    normalize_perimeter,
)

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}

JOINT_GRID = (-1.0, 0.0, 1.0, 2.0, 3.0)


# subclass
class joint_perimeter(law_base):
    """The empirical joint CDF of both normalized lengths on a 5x5 grid against the product of Gumbels."""

    def reports(self):
        batch = self.boltzmann_statistics()
        x_plus = normalize_perimeter(batch['len_plus'], self.n)
        x_minus = normalize_perimeter(batch['len_minus'], self.n)
        empirical = []
        reference = []
        for x in JOINT_GRID:
            for y in JOINT_GRID:
                empirical.append(np.mean((x_plus <= x) & (x_minus <= y)))
                reference.append(float(joint_perimeter_cdf(x, y)))
        self.extra = {'grid': list(JOINT_GRID), 'empirical': [float(v) for v in empirical]}
        return [max_deviation(empirical, reference, self.samples, self.threshold, 'joint-perimeter')]
