from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

from .law_base import law_base
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import (
    DEFAULT_POCHHAMMER_THRESHOLD,
    check_pochhammer_bounds,
)


# subclass
class pochhammer(law_base):
    default_samples = 1000
    default_threshold = DEFAULT_POCHHAMMER_THRESHOLD

    def __init__(self, config, log=None):
        super().__init__(config, log)
        self.trials = int(config.get('trials') or self.samples)

    def reports(self):
        report = check_pochhammer_bounds(self.trials, self.rng_seed.generator(), self.threshold)
        self.extra = dict(report.detail)
        return [report]
