#!/usr/bin/python
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
from __future__ import (absolute_import, division, print_function)
__metaclass__ = type


DOCUMENTATION = r'''

module: concave_count

short_description: exact counts of concave compositions

author:
- "Concave Lab maintainers"

description:
- Use concave_count to compute exact p(n), p2(n) and V(n) tables by power series arithmetic.
- Optionally lists every concave composition of a small n and compares the counts with their leading asymptotic terms.

options:
    n:
        description:
        - Size whose counts are reported as C(V(n) = ...) lines.
        - When I(n_max) is not given the table is built up to I(n).
        type: int
        required: False
    n_max:
        description: Largest size of the count table. Defaults to I(n), or 2000 when I(n) is not given either.
        type: int
        required: False
    check_asymptotic:
        description: Report the ratio of V(n), p2(n) and p(n) to their leading asymptotic terms.
        type: bool
        required: False
    enumerate:
        description:
        - List every concave composition of I(n) in canonical order.
        - Refused with rc 5 when I(n) exceeds I(bound).
        type: bool
        required: False
    bound:
        description: Largest n that I(enumerate) accepts. Defaults to 25.
        type: int
        required: False
    out:
        description: Path of the table file. C(<out>.manifest.json) is written beside it.
        type: path
        required: False
    format:
        description: Table file format. Defaults to C(json).
        type: str
        choices: [ json, csv ]
        required: False
    config_file:
        description: YAML file of option values. Explicit options override its values.
        type: path
        required: False
'''

EXAMPLES = r'''
- name: "Count the concave compositions of 3"
  combinat.concave_lab.concave_count:
    n: 3

- name: "Write the table up to 1000 and compare with the asymptotic formula"
  combinat.concave_lab.concave_count:
    n: 1000
    check_asymptotic: True
    out: /tmp/counts.json

- name: "List the compositions of 4"
  combinat.concave_lab.concave_count:
    n: 4
    enumerate: True
'''

RETURN = r'''
rc:
    description: exit status, 0 on success, 2 when the table exceeds the resource limit, 5 on invalid input.
    returned: always
    type: int
lines:
    description: human readable report lines such as C(V(3) = 13).
    returned: success
    type: list
    elements: str
table:
    description: the count table with every count as a decimal string, when I(out) is not set.
    returned: success
    type: dict
compositions:
    description: the concave compositions of I(n), when I(enumerate) is set.
    returned: when enumerate is set
    type: list
    elements: dict
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

from ansible.module_utils.basic import AnsibleModule
from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import ConcaveLabError, DomainError
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import (
    IMP_ERR as ENUM_IMP_ERR,
    DEFAULT_ENUM_BOUND,
    DEFAULT_N_MAX,
    asymptotic_ratio,
    central_part_zero_probability,
    count_table,
    enumerate_concave,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import (
    IMP_ERR as EXPERIMENT_IMP_ERR,
    RunManifest,
    render_lines,
    write_csv,
    write_json,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.run_utils import (
    check_required_libs,
    fail_from_error,
    finish_module,
    load_module_config,
)

DEFAULTS = {
    'format': 'json',
    'bound': DEFAULT_ENUM_BOUND,
    'check_asymptotic': False,
    'enumerate': False,
}

COUNT_TEMPLATE = "V({{ n }}) = {{ v }}"
RATIO_TEMPLATE = "{{ which }}({{ n }}) / asymptotic = {{ '%.6f' | format(ratio) }}"
ZERO_TEMPLATE = "P(c = 0 | n = {{ n }}) = {{ '%.6f' | format(probability) }}"


def table_rows(table):
    return [(n, table.p[n], table.p2[n], table.v[n]) for n in range(table.n_max + 1)]


def count_lines(config, table):
    n = config.get('n')
    if n is None:
        return []
    lines = render_lines(COUNT_TEMPLATE, [{'n': n, 'v': table.v[n]}])
    if n >= 1:
        lines += render_lines(ZERO_TEMPLATE, [{'n': n, 'probability': central_part_zero_probability(n, table)}])
    if config['check_asymptotic'] and n >= 1:
        lines += render_lines(RATIO_TEMPLATE, [
            {'which': label, 'n': n, 'ratio': asymptotic_ratio(table, n, which)}
            for label, which in (('V', 'v'), ('p2', 'p2'), ('p', 'p'))
        ])
    return lines


def execute_module(module: AnsibleModule):
    if not check_required_libs(module, ENUM_IMP_ERR, EXPERIMENT_IMP_ERR):
        return

    config = load_module_config(module, DEFAULTS)
    if config is None:
        return
    manifest = RunManifest(command='count', config=dict(config))
    out = config.get('out')

    try:
        n = config.get('n')
        n_max = config.get('n_max')
        if n_max is None:
            n_max = n if n is not None else DEFAULT_N_MAX
        if n is not None and not 0 <= n <= n_max:
            raise DomainError(f"n={n} must lie between 0 and n_max={n_max}")
        module.log(f'computing count table up to n_max={n_max}')
        table = count_table(n_max)
        result = {'lines': count_lines(config, table)}

        if config['enumerate']:
            if n is None:
                raise DomainError("enumerate needs n")
            compositions = enumerate_concave(n, config['bound'])
            if len(compositions) != table.v[n]:
                module.warn(f'enumeration found {len(compositions)} compositions of {n}, the table says {table.v[n]}')
            result['compositions'] = [comp.to_dict() for comp in compositions]

        manifest.results = {'n_max': n_max, 'v_n': None if n is None else str(table.v[n])}
        if out and not module.check_mode:
            if config['format'] == 'csv':
                write_csv(out, ('n', 'p', 'p2', 'v'), table_rows(table))
            else:
                write_json(out, table.to_dict())
        else:
            result['table'] = table.to_dict()
    except ConcaveLabError as e:
        fail_from_error(module, e, manifest, out)
        return

    manifest.finish()
    finish_module(module, manifest, out, **result)


def main():
    argument_spec = dict(
        n=dict(type='int', required=False),
        n_max=dict(type='int', required=False),
        check_asymptotic=dict(type='bool', required=False),
        enumerate=dict(type='bool', required=False),
        bound=dict(type='int', required=False),
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
