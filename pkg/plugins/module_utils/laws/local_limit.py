from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import math

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import pair_counts
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    local_limit_report,
    make_params,
    size_moments,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import GoFReport, make_report

Z_THRESHOLD = 4.0
MEAN_OFFSET_THRESHOLD = 2.0
VARIANCE_SCALE_TOLERANCE = 0.2


# subclass
class local_limit(law_base):
    """
    local_limit computes Q(N = n) exactly at the tuned q and sets it beside both candidate
    constants 1/(48 n^3)^(1/4) and 1/(96 n^3)^(1/4). The size moments are checked against
    their asymptotic scales, and with samples > 0 also against Monte Carlo draws.
    """
    default_n = 500
    default_samples = 0
    default_threshold = 0.15

    def reports(self):
        table = pair_counts(self.n)
        report = local_limit_report(self.n, table)
        self.log(f"Q(N={self.n}) = {report.exact:.10g}, ratio to 48: {report.ratio_48:.6f}, "
                 f"ratio to 96: {report.ratio_96:.6f}")
        within = [abs(report.ratio_48 - 1) <= self.threshold, abs(report.ratio_96 - 1) <= self.threshold]
        statistic = min(abs(report.ratio_48 - 1), abs(report.ratio_96 - 1))
        results = [GoFReport(test='local-limit', statistic=statistic, n_samples=0, threshold=self.threshold,
                             passed=sum(within) == 1, detail=report.to_dict())]
        self.extra = report.to_dict()

        params = make_params(self.n, self.tail_eps)
        moments = size_moments(params)
        results.append(make_report('mean-offset', abs(self.n - moments.mean) / self.n ** 0.75, 0,
                                   MEAN_OFFSET_THRESHOLD))
        scale = moments.variance * math.pi / (math.sqrt(12) * self.n ** 1.5)
        results.append(make_report('variance-scale', abs(scale - 1), 0, VARIANCE_SCALE_TOLERANCE,
                                   detail={'scale': scale}))

        if self.samples > 0:
            results.extend(self.monte_carlo(report.exact, moments))
        return results

    def monte_carlo(self, exact, moments):
        sizes = self.boltzmann_statistics()['size']
        m = sizes.size
        hits = float((sizes == self.n).mean())
        hit_z = abs(hits - exact) / math.sqrt(exact * (1 - exact) / m)
        mean_z = abs(float(sizes.mean()) - moments.mean) / math.sqrt(moments.variance / m)
        variance = float(sizes.var(ddof=1))
        variance_z = abs(variance - moments.variance) / (moments.variance * math.sqrt(2.0 / (m - 1))) if m > 1 else 0.0
        return [
            make_report('local-limit-mc', hit_z, m, Z_THRESHOLD, detail={'frequency': hits, 'exact': exact}),
            make_report('size-mean', mean_z, m, Z_THRESHOLD, detail={'sample': float(sizes.mean()), 'exact': moments.mean}),
            make_report('size-variance', variance_z, m, Z_THRESHOLD, detail={'sample': variance, 'exact': moments.variance}),
        ]
