from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import math
import traceback

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import (
    is_log_concave,
    pair_counts,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import mixture_weights
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import make_report

IMP_ERR = {}
try:
    from scipy.special import erfc
except ImportError as e:
    IMP_ERR['scipy'] = {'error': traceback.format_exc(),
                        'exception': e}

# p(k) is log-concave from here on
LOG_CONCAVE_FROM = 26
TAIL_SIGMAS = 5.0
TAIL_THRESHOLD = 1e-5


# subclass
class weights(law_base):
    """
    weights checks the exact mixture weights w_k = p(k) p(n-k) / p2(n): they sum to one,
    follow the Gaussian form for |z| <= n^(3/4), and carry a Gaussian-sized tail.
    """
    default_n = 2000
    default_samples = 0
    default_threshold = 0.15

    def reports(self):
        table = pair_counts(self.n)
        w = mixture_weights(self.n, table)
        sigma = w.sigma_hat
        gaussian = w.gaussian_deviation(self.n ** 0.75)
        far = w.tail_mass(TAIL_SIGMAS * sigma)
        radius = self.n ** 0.8
        tail = w.tail_mass(radius)
        gaussian_tail = float(erfc(radius / (sigma * math.sqrt(2))))
        tail_log_ratio = abs(math.log2(tail / gaussian_tail)) if tail > 0 else math.inf
        violations = [k for k in range(LOG_CONCAVE_FROM, self.n) if not is_log_concave(table, k)]
        self.extra = {
            'sigma_hat': sigma,
            'tail_beyond_n_0_8': tail,
            'gaussian_tail_beyond_n_0_8': gaussian_tail,
        }
        return [
            make_report('weights-sum', abs(float(w.total() - 1)), 0, 1e-12),
            make_report('weights-gaussian', gaussian, 0, self.threshold),
            make_report('weights-tail', far, 0, TAIL_THRESHOLD, detail={'radius': TAIL_SIGMAS * sigma}),
            make_report('weights-tail-gaussian', tail_log_ratio, 0, 1.0,
                        detail={'radius': radius, 'tail': tail, 'gaussian_tail': gaussian_tail}),
            make_report('log-concave', len(violations), 0, 0, detail={'violations': violations[:10]}),
        ]
