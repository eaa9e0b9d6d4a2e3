#!/usr/bin/python
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
from __future__ import (absolute_import, division, print_function)
__metaclass__ = type


DOCUMENTATION = r'''

module: concave_sample

short_description: random concave compositions

author:
- "Concave Lab maintainers"

description:
- Use concave_sample to draw reproducible random concave compositions with central part 0.
- C(uniform) mode draws pairs of partitions exactly uniformly among the p2(n) pairs of total size n
  by rejecting Boltzmann draws of the wrong size.
- C(boltzmann) mode draws from the Boltzmann measure tuned to n, whose size is only close to n.
  Uniform sampling is refused above I(uniform_max_n); the switch to Boltzmann sampling must be explicit.

options:
    n:
        description: Target size.
        type: int
        required: False
    samples:
        description: Number of samples to draw. Defaults to 1.
        type: int
        required: False
    seed:
        description: Master seed. Defaults to 20240901.
        type: int
        required: False
    stream:
        description: Stream index under the master seed. Defaults to 0.
        type: int
        required: False
    mode:
        description: Sampling measure. Defaults to C(uniform).
        type: str
        choices: [ uniform, boltzmann ]
        required: False
    tail_eps:
        description: Total variation allowed for truncating the Boltzmann frequencies. Defaults to 1e-12.
        type: float
        required: False
    budget:
        description:
        - Largest number of rejected draws allowed for one uniform sample; exhausting it returns rc 3.
        - Can also be specified via CONCAVE_LAB_BUDGET environment variable.
          Defaults to 100 (48 n^3)^(1/4).
        type: int
        required: False
    uniform_max_n:
        description: Largest n accepted in C(uniform) mode. Defaults to 10000.
        type: int
        required: False
    stats:
        description: Add the length, tilt and half-perimeter statistics to every sample.
        type: bool
        required: False
    workers:
        description: Number of worker processes for C(boltzmann) mode. The output does not depend on it.
        type: int
        required: False
    out:
        description: Path of the sample file. C(<out>.manifest.json) is written beside it.
        type: path
        required: False
    format:
        description:
        - C(json) writes one JSON object per line; C(csv) writes the statistics of each sample.
          Defaults to C(json).
        type: str
        choices: [ json, csv ]
        required: False
    config_file:
        description: YAML file of option values. Explicit options override its values.
        type: path
        required: False
'''

EXAMPLES = r'''
- name: "Draw 1000 uniform compositions of 8"
  combinat.concave_lab.concave_sample:
    n: 8
    samples: 1000
    seed: 7
    out: /tmp/samples.jsonl

- name: "Draw one Boltzmann composition near one million with its statistics"
  combinat.concave_lab.concave_sample:
    n: 1000000
    mode: boltzmann
    stats: True
'''

RETURN = r'''
rc:
    description: exit status, 0 on success, 3 when the rejection budget is exhausted, 5 on invalid input.
    returned: always
    type: int
samples:
    description: >-
      the drawn samples, when I(out) is not set. Uniform samples hold n, minus, c, plus and trials;
      Boltzmann samples hold n, size and frequencies. Both carry stats when I(stats) is set.
    returned: success
    type: list
    elements: dict
trials:
    description: rejected draws spent on the sample that exhausted the budget.
    returned: when the rejection budget is exhausted
    type: int
manifest:
    description: run manifest with the resolved configuration, version, wall-clock and exit status.
    returned: always
    type: dict
exception:
    description: exception catched during the process.
    returned: when exception is catched
    type: complex
    contains: {}
'''

from ansible.module_utils.basic import AnsibleModule, env_fallback
from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import ConcaveLabError, DomainError
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import ConcaveComposition
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import (
    IMP_ERR as EXPERIMENT_IMP_ERR,
    RunManifest,
    run_chunks,
    write_csv,
    write_json_lines,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.run_utils import (
    check_required_libs,
    fail_from_error,
    finish_module,
    load_module_config,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    IMP_ERR as SAMPLER_IMP_ERR,
    DEFAULT_SEED,
    DEFAULT_TAIL_EPS,
    DEFAULT_UNIFORM_MAX_N,
    RngSeed,
    iter_uniform_pairs,
    make_params,
    sample_boltzmann_chunk,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    IMP_ERR as STATS_IMP_ERR,
    summarize,
    summarize_frequencies,
)

DEFAULTS = {
    'samples': 1,
    'seed': DEFAULT_SEED,
    'stream': 0,
    'mode': 'uniform',
    'tail_eps': DEFAULT_TAIL_EPS,
    'budget': None,
    'uniform_max_n': DEFAULT_UNIFORM_MAX_N,
    'stats': False,
    'workers': 1,
    'format': 'json',
}

STAT_COLUMNS = ('size', 'len_minus', 'len_plus', 'length', 'tilt', 'largest_part', 'half_perimeter')


def uniform_rows(config, rng_seed):
    rows = []
    pairs = iter_uniform_pairs(config['n'], rng_seed.generator(), config['budget'], config['uniform_max_n'])
    for _ in range(config['samples']):
        minus, plus, trials = next(pairs)
        comp = ConcaveComposition(minus, 0, plus)
        row = {'n': config['n']}
        row.update(comp.to_dict())
        row['trials'] = trials
        if config['stats']:
            row['stats'] = summarize(comp).to_dict()
        rows.append(row)
    return rows


def boltzmann_rows(config, rng_seed):
    params = make_params(config['n'], config['tail_eps'])
    chunks = run_chunks(sample_boltzmann_chunk, params, config['samples'], rng_seed, config['workers'])
    rows = []
    for frequencies in (f for chunk in chunks for f in chunk):
        row = {'n': config['n'], 'size': frequencies.size, 'frequencies': frequencies.to_dict()}
        if config['stats']:
            row['stats'] = summarize_frequencies(frequencies).to_dict()
        rows.append(row)
    return rows


def stat_rows(rows):
    table = []
    for row in rows:
        stats = dict(row['stats'], size=row['stats']['size_minus'] + row['stats']['c'] + row['stats']['size_plus'])
        table.append(tuple(stats[c] for c in STAT_COLUMNS))
    return table


def execute_module(module: AnsibleModule):
    if not check_required_libs(module, SAMPLER_IMP_ERR, STATS_IMP_ERR, EXPERIMENT_IMP_ERR):
        return

    config = load_module_config(module, DEFAULTS)
    if config is None:
        return
    manifest = RunManifest(command='sample', config=dict(config))
    out = config.get('out')

    try:
        if config.get('n') is None:
            raise DomainError("n is required")
        if config['samples'] < 1:
            raise DomainError(f"samples must be >= 1, got {config['samples']}")
        if config['format'] == 'csv':
            config['stats'] = True
        rng_seed = RngSeed(seed=config['seed'], stream=config['stream'])
        module.log(f"drawing {config['samples']} {config['mode']} samples at n={config['n']}")
        if config['mode'] == 'uniform':
            rows = uniform_rows(config, rng_seed)
            manifest.results = {'mean_trials': sum(r['trials'] for r in rows) / len(rows)}
        else:
            rows = boltzmann_rows(config, rng_seed)
            manifest.results = {'mean_size': sum(r['size'] for r in rows) / len(rows)}

        result = {}
        if out and not module.check_mode:
            if config['format'] == 'csv':
                write_csv(out, STAT_COLUMNS, stat_rows(rows))
            else:
                write_json_lines(out, rows)
        else:
            result['samples'] = rows
    except ConcaveLabError as e:
        fail_from_error(module, e, manifest, out)
        return

    manifest.finish()
    finish_module(module, manifest, out, **result)


def main():
    argument_spec = dict(
        n=dict(type='int', required=False),
        samples=dict(type='int', required=False),
        seed=dict(type='int', required=False),
        stream=dict(type='int', required=False),
        mode=dict(type='str', choices=['uniform', 'boltzmann'], required=False),
        tail_eps=dict(type='float', required=False),
        budget=dict(type='int', required=False, fallback=(
            env_fallback, ['CONCAVE_LAB_BUDGET'])),
        uniform_max_n=dict(type='int', required=False),
        stats=dict(type='bool', required=False),
        workers=dict(type='int', required=False),
        out=dict(type='path', required=False),
        format=dict(type='str', choices=['json', 'csv'], required=False),
        config_file=dict(type='path', required=False),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    execute_module(module)


if __name__ == '__main__':
    main()
