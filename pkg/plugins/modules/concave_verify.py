#!/usr/bin/python
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
from __future__ import (absolute_import, division, print_function)
__metaclass__ = type


DOCUMENTATION = r'''

module: concave_verify

short_description: goodness-of-fit checks of concave composition limit laws

author:
- "Concave Lab maintainers"

description:
- Use concave_verify to run one limit law experiment and report every test it makes.
- A failed test returns rc 4, or only a warning when I(warn_only) is set.

options:
    law:
        description:
        - Law to verify.
        - C(perimeter), C(joint-perimeter), C(tilt) and C(length) sample the Boltzmann measure tuned to I(n).
        - C(perimeter) also checks each side length against its exact law at the tuned q.
        - C(local-limit) and C(weights) use exact counts; C(pochhammer) checks product inequalities at random points.
        type: str
        choices: [  joint-perimeter,
                    length,
                    local-limit,
                    perimeter,
                    pochhammer,
                    tilt,
                    weights
                 ]
        required: True
    n:
        description: Target size. The default depends on the law.
        type: int
        required: False
    samples:
        description:
        - Number of Monte Carlo samples. The default depends on the law.
        - For C(local-limit) a positive value adds a Monte Carlo check of Q(N = n) and the size moments.
        type: int
        required: False
    trials:
        description: Number of random points for C(pochhammer). Defaults to 1000.
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
    threshold:
        description: Threshold of the main test statistic. The default depends on the law.
        type: float
        required: False
    tail_eps:
        description: Total variation allowed for truncating the Boltzmann frequencies. Defaults to 1e-12.
        type: float
        required: False
    workers:
        description: Number of worker processes for sampling. The reports do not depend on it.
        type: int
        required: False
    warn_only:
        description: Report failed tests as warnings and return rc 0.
        type: bool
        required: False
    out:
        description: Path of the JSON report file. C(<out>.manifest.json) is written beside it.
        type: path
        required: False
    config_file:
        description: YAML file of option values. Explicit options override its values.
        type: path
        required: False
'''

EXAMPLES = r'''
- name: "Check the tilt law at one million"
  combinat.concave_lab.concave_verify:
    law: tilt
    n: 1000000
    samples: 10000

- name: "Compare the exact local limit value with both candidate constants"
  combinat.concave_lab.concave_verify:
    law: local-limit
    n: 500

- name: "Check the product inequalities without failing the play"
  combinat.concave_lab.concave_verify:
    law: pochhammer
    trials: 1000
    warn_only: True
'''

RETURN = r'''
rc:
    description: exit status, 0 on success, 2 on resource limits, 4 when a test fails, 5 on invalid input.
    returned: always
    type: int
reports:
    description: one entry per test with keys test, statistic, n, threshold and pass.
    returned: always
    type: list
    elements: dict
lines:
    description: human readable report lines.
    returned: always
    type: list
    elements: str
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

import os

from ansible.module_utils.basic import AnsibleModule
from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import ConcaveLabError, EXIT_OK, EXIT_TEST_FAILED
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import (
    IMP_ERR as EXPERIMENT_IMP_ERR,
    RunManifest,
    render_report_lines,
    write_json,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.limits import IMP_ERR as LIMITS_IMP_ERR
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.joint_perimeter import joint_perimeter
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.length import length
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.local_limit import local_limit
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.perimeter import perimeter
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.pochhammer import pochhammer
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.tilt import tilt
from ansible_collections.combinat.concave_lab.plugins.module_utils.laws.weights import weights
from ansible_collections.combinat.concave_lab.plugins.module_utils.run_utils import (
    check_required_libs,
    fail_from_error,
    finish_module,
    load_module_config,
    save_manifest,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.sampler import IMP_ERR as SAMPLER_IMP_ERR
from ansible_collections.combinat.concave_lab.plugins.module_utils.stats import IMP_ERR as STATS_IMP_ERR
from pkgutil import iter_modules
from pathlib import Path

DEFAULTS = {
    'warn_only': False,
}


def law_choices():
    current_path = os.path.dirname(__file__)
    path = current_path[:current_path.rfind('/')]
    package_dir = Path(f'{path}/module_utils/laws').resolve()
    choices = []
    for (loader, module_name, ispkg) in iter_modules([str(package_dir)]):
        if module_name != 'law_base':
            choices.append(module_name.replace('_', '-'))
    return sorted(choices)


def get_law(name, config, log=None):
    return globals()[name.replace('-', '_')](config, log)


def execute_module(module: AnsibleModule):
    if not check_required_libs(module, SAMPLER_IMP_ERR, STATS_IMP_ERR, LIMITS_IMP_ERR, EXPERIMENT_IMP_ERR):
        return

    config = load_module_config(module, DEFAULTS)
    if config is None:
        return
    manifest = RunManifest(command='verify', config=dict(config))
    out = config.get('out')

    try:
        law = get_law(config['law'], config, module.log)
        for report in law.reports():
            manifest.add_report(report)
        manifest.results = law.results()
    except ConcaveLabError as e:
        fail_from_error(module, e, manifest, out)
        return

    lines = render_report_lines(manifest.reports)
    reports = [r.to_dict() for r in manifest.reports]
    if out and not module.check_mode:
        try:
            write_json(out, reports)
        except ConcaveLabError as e:
            fail_from_error(module, e, manifest, out)
            return

    if not manifest.passed:
        failed = [r.test for r in manifest.reports if not r.passed]
        if config['warn_only']:
            for line, report in zip(lines, manifest.reports):
                if not report.passed:
                    module.warn(line)
            manifest.finish(EXIT_OK)
        else:
            manifest.finish(EXIT_TEST_FAILED)
            try:
                save_manifest(module, manifest, out)
            except (ConcaveLabError, OSError) as e:
                module.warn(f'failed to write manifest for {out}: {e}')
            module.fail_json(msg=f"law {config['law']} failed: {', '.join(failed)}", rc=EXIT_TEST_FAILED,
                             reports=reports, lines=lines, manifest=manifest.to_dict())
            return
    else:
        manifest.finish()
    finish_module(module, manifest, out, reports=reports, lines=lines)


def main():
    argument_spec = dict(
        law=dict(type='str', choices=law_choices(), required=True),
        n=dict(type='int', required=False),
        samples=dict(type='int', required=False),
        trials=dict(type='int', required=False),
        seed=dict(type='int', required=False),
        stream=dict(type='int', required=False),
        threshold=dict(type='float', required=False),
        tail_eps=dict(type='float', required=False),
        workers=dict(type='int', required=False),
        warn_only=dict(type='bool', required=False),
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
