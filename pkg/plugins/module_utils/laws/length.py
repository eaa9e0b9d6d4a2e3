from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import length_sum_cdf
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    ecdf,
    ks_distance,
    normalize_length_sum,
)

ORACLE_SAMPLES = 1000000
ORACLE_THRESHOLD = 0.005
# substream index reserved for the oracle draws, beyond any sample chunk
ORACLE_CHUNK = 2 ** 31


# subclass
class length(law_base):
    """
    length checks l(minus) + l(plus) against the law of a sum of two independent Gumbels,
    and checks that law itself against a Monte Carlo convolution of Gumbel draws.
    """

    def reports(self):
        batch = self.boltzmann_statistics()
        total = batch['len_minus'] + batch['len_plus']
        sampled = ks_distance(ecdf(normalize_length_sum(total, self.n)), length_sum_cdf, self.threshold, 'length')
        gen = self.rng_seed.generator(chunk=ORACLE_CHUNK)
        oracle = gen.gumbel(size=ORACLE_SAMPLES) + gen.gumbel(size=ORACLE_SAMPLES)
        convolution = ks_distance(ecdf(oracle), length_sum_cdf, ORACLE_THRESHOLD, 'length-sum-oracle')
        return [sampled, convolution]
