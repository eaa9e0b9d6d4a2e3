from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import traceback

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import gumbel_cdf
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    exact_length_cdf_array,
    make_params,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    ecdf,
    ks_distance,
    max_deviation,
    normalize_perimeter,
)

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}


def exact_length_report(lengths, q, threshold, test):
    """
    exact_length_report is the KS distance between integer side lengths and the exact
    finite-q law (q^(i+1); q)_inf. Both CDFs step at integers only, so the supremum is
    taken over every integer from one below the smallest sample to the largest.
    """
    e = ecdf(lengths)
    points = np.arange(int(lengths.min()) - 1, int(lengths.max()) + 1)
    return max_deviation(e(points), exact_length_cdf_array(q, points), e.n_samples, threshold, test)


# subclass
class perimeter(law_base):
    """
    Each side's normalized length, and the largest part, against the standard Gumbel law.
    Raw side lengths are also checked against their exact law at the tuned q.
    """

    def reports(self):
        batch = self.boltzmann_statistics()
        checks = [
            ('perimeter-plus', batch['len_plus']),
            ('perimeter-minus', batch['len_minus']),
            ('largest-part-plus', batch['largest_plus']),
        ]
        reports = [ks_distance(ecdf(normalize_perimeter(values, self.n)), gumbel_cdf, self.threshold, test)
                   for test, values in checks]
        q = make_params(self.n, self.tail_eps).q
        reports += [exact_length_report(batch[key], q, self.threshold, test)
                    for test, key in (('exact-length-plus', 'len_plus'), ('exact-length-minus', 'len_minus'))]
        return reports
