from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import traceback

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import DomainError
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import run_chunks
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    DEFAULT_SEED,
    DEFAULT_TAIL_EPS,
    RngSeed,
    make_params,
    sample_boltzmann_batch,
)

IMP_ERR = {}
try:
    import numpy as np
except ImportError as e:
    IMP_ERR['numpy'] = {'error': traceback.format_exc(),
                        'exception': e}


def boltzmann_chunk(params, count, gen):
    return sample_boltzmann_batch(params, gen, count)


# superclass
class law_base():
    """
    law_base runs one verifiable law and returns its GoFReports.
    Subclasses set the defaults and implement reports(); results() adds
    law-specific data to the run manifest.
    """
    default_n = 1000000
    default_samples = 10000
    default_threshold = 0.05

    def __init__(self, config, log=None):
        self.config = config
        self.log = log or (lambda msg: None)
        self.n = int(config.get('n') or self.default_n)
        self.samples = int(config.get('samples') or self.default_samples)
        self.threshold = float(config.get('threshold') or self.default_threshold)
        self.tail_eps = float(config.get('tail_eps') or DEFAULT_TAIL_EPS)
        self.workers = int(config.get('workers') or 1)
        seed = config.get('seed')
        self.rng_seed = RngSeed(seed=DEFAULT_SEED if seed is None else int(seed),
                                stream=int(config.get('stream') or 0))
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        self.extra = {}

    def reports(self):
        return []

    def results(self):
        return self.extra

    def boltzmann_statistics(self, n=None, samples=None):
        """
        boltzmann_statistics draws samples under the Boltzmann measure tuned to n, in
        fixed chunks fanned out over the configured workers, and concatenates the
        per-sample statistics in chunk order.
        """
        n = self.n if n is None else n
        samples = self.samples if samples is None else samples
        params = make_params(n, self.tail_eps)
        self.log(f"drawing {samples} Boltzmann samples at n={n} (q={params.q:.12g}, k_max={params.k_max})")
        chunks = run_chunks(boltzmann_chunk, params, samples, self.rng_seed, self.workers)
        return {key: np.concatenate([c[key] for c in chunks]) for key in chunks[0]}
