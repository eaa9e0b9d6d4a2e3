from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import logistic_cdf
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    ecdf,
    ks_distance,
    normalize_tilt,
)


# subclass
class tilt(law_base):
    def reports(self):
        batch = self.boltzmann_statistics()
        t = batch['len_minus'] - batch['len_plus']
        return [ks_distance(ecdf(normalize_tilt(t, self.n)), logistic_cdf, self.threshold, 'tilt')]
