#!/usr/bin/python
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
from __future__ import (absolute_import, division, print_function)
__metaclass__ = type


DOCUMENTATION = r'''

module: concave_shape

short_description: normalized profiles of concave compositions and their limit curves

author:
- "Concave Lab maintainers"

description:
- Use concave_shape to export the normalized graph of random (or given) concave compositions together
  with the limit curve fitted to each sample, and to measure how far the graph is from the curve.
- In I(partition_mode) single partitions are sampled and compared with the curve
  e^(-pi x / sqrt 6) + e^(-pi y / sqrt 6) = 1.
- The CSV output has the columns x, y, series and, for I(aggregate=per-sample), sample.
  series is one of C(profile), C(limit_plus), C(limit_minus).

options:
    n:
        description: Target size. Required unless I(from_parts) is given.
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
        description: Sampling measure for compositions. Defaults to C(boltzmann).
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
        type: int
        required: False
    uniform_max_n:
        description: Largest n accepted in C(uniform) mode. Defaults to 10000.
        type: int
        required: False
    y_grid:
        description:
        - Normalized heights, either a list or C(start:stop:count). Every height must be positive.
          Defaults to C(0.5:3.0:26).
        type: raw
        required: False
    from_parts:
        description:
        - A concave composition read left to right, as a list or a comma separated string, e.g.
          C(8,6,6,3,2,1,1,1,0,1,1,1,2,5,5,5,6). No sampling is done.
        type: raw
        required: False
    partition_mode:
        description: Sample single partitions instead of concave compositions.
        type: bool
        required: False
    aggregate:
        description:
        - C(median) exports the per-height median of the sampled boundaries,
          C(per-sample) exports every sample. Defaults to C(median).
        type: str
        choices: [ median, per-sample ]
        required: False
    threshold:
        description: Threshold of the median sup-deviation between profiles and fitted curves. Defaults to 0.1.
        type: float
        required: False
    workers:
        description: Number of worker processes for Boltzmann sampling. The output does not depend on it.
        type: int
        required: False
    out:
        description: Path of the CSV file. C(<out>.manifest.json) is written beside it.
        type: path
        required: False
    config_file:
        description: YAML file of option values. Explicit options override its values.
        type: path
        required: False
'''

EXAMPLES = r'''
- name: "Profile of a given composition of 54"
  combinat.concave_lab.concave_shape:
    from_parts: 8,6,6,3,2,1,1,1,0,1,1,1,2,5,5,5,6

- name: "Median profile of 200 compositions near one million with fitted limit curves"
  combinat.concave_lab.concave_shape:
    n: 1000000
    samples: 200
    out: /tmp/shape.csv

- name: "Single partitions against the Temperley curve"
  combinat.concave_lab.concave_shape:
    n: 100000
    partition_mode: True
'''

RETURN = r'''
rc:
    description: exit status, 0 on success, 2 or 3 on resource and budget limits, 4 when the deviation exceeds the threshold, 5 on invalid input.
    returned: always
    type: int
deviation:
    description: median and per-sample sup-deviation between the normalized profile and its limit curve.
    returned: success
    type: dict
profile:
    description: the exported rows (x, y, series[, sample]), when I(out) is not set.
    returned: success
    type: list
    elements: list
manifest:
    description: run manifest with the resolved configuration, version, wall-clock, reports and exit status.
    returned: always
    type: dict
exception:
    description: exception catched during the process.
    returned: when exception is catched
    type: complex
    contains: {}
'''

import statistics

from ansible.module_utils.basic import AnsibleModule, env_fallback
from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    ConcaveLabError,
    DomainError,
    EXIT_TEST_FAILED,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import ConcaveComposition
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import (
    IMP_ERR as EXPERIMENT_IMP_ERR,
    DEFAULT_Y_GRID,
    RunManifest,
    parse_grid,
    parse_parts,
    render_report_lines,
    run_chunks,
    write_csv,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import (
    IMP_ERR as LIMITS_IMP_ERR,
    FittingConstants,
    build_partition_profile,
    build_profile,
    fit_constants,
    limit_curve,
    limit_shape_deviation,
    median_boundary,
    temperley_curve,
    temperley_deviation,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.run_utils import (
    check_required_libs,
    fail_from_error,
    finish_module,
    load_module_config,
    save_manifest,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import (
    IMP_ERR as SAMPLER_IMP_ERR,
    DEFAULT_SEED,
    DEFAULT_TAIL_EPS,
    DEFAULT_UNIFORM_MAX_N,
    RngSeed,
    frequencies_to_partitions,
    iter_uniform_pairs,
    make_params,
    make_partition_params,
    sample_boltzmann_chunk,
    sample_partition_chunk,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import (
    IMP_ERR as STATS_IMP_ERR,
    make_report,
    summarize,
)

DEFAULTS = {
    'samples': 1,
    'seed': DEFAULT_SEED,
    'stream': 0,
    'mode': 'boltzmann',
    'tail_eps': DEFAULT_TAIL_EPS,
    'budget': None,
    'uniform_max_n': DEFAULT_UNIFORM_MAX_N,
    'y_grid': DEFAULT_Y_GRID,
    'partition_mode': False,
    'aggregate': 'median',
    'threshold': 0.1,
    'workers': 1,
}


def sample_compositions(config, rng_seed):
    """sample_compositions draws the configured number of compositions with central part 0."""
    n = config['n']
    if config['mode'] == 'uniform':
        pairs = iter_uniform_pairs(n, rng_seed.generator(), config['budget'], config['uniform_max_n'])
        return [ConcaveComposition(minus, 0, plus) for minus, plus, _ in (next(pairs) for _ in range(config['samples']))]
    params = make_params(n, config['tail_eps'])
    chunks = run_chunks(sample_boltzmann_chunk, params, config['samples'], rng_seed, config['workers'])
    comps = []
    for f in (f for chunk in chunks for f in chunk):
        minus, plus = frequencies_to_partitions(f)
        comps.append(ConcaveComposition(minus, 0, plus))
    return comps


def sample_partitions(config, rng_seed):
    params = make_partition_params(config['n'], config['tail_eps'])
    chunks = run_chunks(sample_partition_chunk, params, config['samples'], rng_seed, config['workers'])
    return [p for chunk in chunks for p in chunk]


def composition_shapes(comps, y_grid):
    """
    composition_shapes builds the profile of every composition of positive size, fits
    its constants and measures the sup-deviation from its limit curve.
    :return: list of (profile, FittingConstants, deviation)
    """
    shapes = []
    for comp in comps:
        if comp.total < 1:
            continue
        profile = build_profile(comp)
        fc = fit_constants(summarize(comp), profile.n)
        profile.limit_overlay = limit_curve(profile.n, fc, y_grid)
        shapes.append((profile, fc, limit_shape_deviation(profile, fc, y_grid)))
    return shapes


def partition_shapes(partitions, y_grid):
    shapes = []
    for partition in partitions:
        if partition.size < 1:
            continue
        profile = build_partition_profile(partition)
        profile.limit_overlay = {'limit_plus': temperley_curve(y_grid)}
        shapes.append((profile, None, temperley_deviation(profile, y_grid)))
    return shapes


def curve_rows(overlay, sample=None):
    rows = []
    for series in ('limit_plus', 'limit_minus'):
        for x, y in overlay.get(series, []):
            rows.append((x, y, series) if sample is None else (x, y, series, sample))
    return rows


def per_sample_rows(shapes):
    rows = []
    for index, (profile, _, _) in enumerate(shapes):
        rows.extend((x, y, 'profile', index) for x, y in profile.breakpoints)
        rows.extend(curve_rows(profile.limit_overlay, index))
    return rows


def median_rows(shapes, y_grid, n, partition_mode):
    """
    median_rows exports the per-height median boundary of all profiles; compositions are
    overlaid with the limit curve whose constants come from the median normalized lengths.
    """
    profiles = [profile for profile, _, _ in shapes]
    if partition_mode:
        rows = [(x, y, 'profile') for x, y in median_boundary(profiles, y_grid)]
        return rows + curve_rows({'limit_plus': temperley_curve(y_grid)})
    rows = [(x, y, 'profile') for x, y in median_boundary(profiles, y_grid, 'minus')]
    rows += [(x, y, 'profile') for x, y in median_boundary(profiles, y_grid, 'plus')]
    fc = FittingConstants(
        c_plus=statistics.median(fc.c_plus for _, fc, _ in shapes),
        c_minus=statistics.median(fc.c_minus for _, fc, _ in shapes),
    )
    return rows + curve_rows(limit_curve(n, fc, y_grid))


def execute_module(module: AnsibleModule):
    if not check_required_libs(module, SAMPLER_IMP_ERR, STATS_IMP_ERR, LIMITS_IMP_ERR, EXPERIMENT_IMP_ERR):
        return

    config = load_module_config(module, DEFAULTS)
    if config is None:
        return
    manifest = RunManifest(command='shape', config=dict(config))
    out = config.get('out')

    try:
        y_grid = parse_grid(config['y_grid'])
        rng_seed = RngSeed(seed=config['seed'], stream=config['stream'])
        if config.get('from_parts') is not None:
            comp = ConcaveComposition.from_sequence(parse_parts(config['from_parts']))
            if config.get('n') is not None and config['n'] != comp.total:
                raise DomainError(f"from_parts sums to {comp.total}, not n={config['n']}")
            shapes = composition_shapes([comp], y_grid)
            gated = False
        else:
            if config.get('n') is None or config['n'] < 1:
                raise DomainError("n >= 1 is required unless from_parts is given")
            if config['samples'] < 1:
                raise DomainError(f"samples must be >= 1, got {config['samples']}")
            module.log(f"drawing {config['samples']} samples at n={config['n']}")
            if config['partition_mode']:
                shapes = partition_shapes(sample_partitions(config, rng_seed), y_grid)
            else:
                shapes = composition_shapes(sample_compositions(config, rng_seed), y_grid)
            gated = True
        if not shapes:
            raise DomainError("every sample was empty, nothing to profile")
        skipped = (1 if not gated else config['samples']) - len(shapes)
        if skipped:
            module.warn(f'{skipped} empty samples were skipped')

        deviations = [d for _, _, d in shapes]
        median = statistics.median(deviations)
        if gated:
            test = 'temperley-shape' if config['partition_mode'] else 'limit-shape'
            manifest.add_report(make_report(test, median, len(shapes), config['threshold']))

        n = shapes[0][0].n if not gated else config['n']
        if config['aggregate'] == 'per-sample' or not gated:
            header = ('x', 'y', 'series', 'sample')
            rows = per_sample_rows(shapes)
        else:
            header = ('x', 'y', 'series')
            rows = median_rows(shapes, y_grid, n, config['partition_mode'])
        deviation = {'median': median, 'per_sample': deviations}
        manifest.results = {'deviation': deviation}

        result = {'deviation': deviation, 'lines': render_report_lines(manifest.reports)}
        if out and not module.check_mode:
            write_csv(out, header, rows)
        else:
            result['profile'] = [list(row) for row in rows]
    except ConcaveLabError as e:
        fail_from_error(module, e, manifest, out)
        return

    manifest.finish()
    if manifest.rc == EXIT_TEST_FAILED:
        try:
            save_manifest(module, manifest, out)
        except (ConcaveLabError, OSError) as e:
            module.warn(f'failed to write manifest for {out}: {e}')
        module.fail_json(msg=f"median deviation {median:.4g} exceeds the threshold {config['threshold']}",
                         rc=EXIT_TEST_FAILED, manifest=manifest.to_dict(), **result)
        return
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
        y_grid=dict(type='raw', required=False),
        from_parts=dict(type='raw', required=False),
        partition_mode=dict(type='bool', required=False),
        aggregate=dict(type='str', choices=['median', 'per-sample'], required=False),
        threshold=dict(type='float', required=False),
        workers=dict(type='int', required=False),
        out=dict(type='path', required=False),
        config_file=dict(type='path', required=False),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    execute_module(module)


if __name__ == '__main__':
    main()
