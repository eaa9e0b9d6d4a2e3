from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import traceback

from ansible.module_utils.basic import AnsibleModule, missing_required_lib
from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    BudgetExceededError,
    ConcaveLabError,
    exit_code_for,
)
from ansible_collections.combinat.concave_lab.plugins.module_utils.experiment_utils import (
    load_config,
    resolve_params,
    write_manifest,
)

# IMP_ERR keys to the name missing_required_lib should report
LIBRARY_NAMES = {
    'numpy': 'numpy',
    'scipy': 'scipy',
    'mpmath': 'mpmath',
    'yaml': 'pyyaml',
    'jinja2': 'jinja2',
    'voluptuous': 'voluptuous',
}


def check_required_libs(module: AnsibleModule, *imp_errs):
    """
    check_required_libs fails the module for the first library missing from any IMP_ERR dict.
    :return: True when every library imported
    """
    for imp_err in imp_errs:
        for key, err in imp_err.items():
            module.fail_json(msg=missing_required_lib(LIBRARY_NAMES.get(key, key)),
                             exception=err['error'])
            return False
    return True


def save_manifest(module: AnsibleModule, manifest, out):
    """save_manifest writes <out>.manifest.json unless out is unset or the module runs in check mode."""
    if not out or module.check_mode:
        return None
    return write_manifest(out, manifest)


def fail_from_error(module: AnsibleModule, err, manifest=None, out=None):
    """
    fail_from_error reports a library exception through fail_json with the mapped exit code.
    """
    rc = exit_code_for(err)
    result = dict(msg=str(err), rc=rc, exception=traceback.format_exc())
    if isinstance(err, BudgetExceededError):
        result['trials'] = err.trials
    if manifest is not None:
        manifest.finish(rc)
        result['manifest'] = manifest.to_dict()
        try:
            save_manifest(module, manifest, out)
        except (ConcaveLabError, OSError) as e:
            module.warn(f'failed to write manifest for {out}: {e}')
    module.fail_json(**result)


def load_module_config(module: AnsibleModule, defaults):
    """
    load_module_config merges module options, the optional config_file and the defaults.
    Config values that an explicit option shadows are reported with module.warn.
    :return: resolved dict, or None after failing the module
    """
    try:
        config = load_config(module.params.get('config_file'))
    except ConcaveLabError as e:
        fail_from_error(module, e)
        return None
    resolved, shadowed = resolve_params(module.params, config, defaults)
    for key in shadowed:
        module.warn(f'option {key} overrides the value from {module.params.get("config_file")}')
    return resolved


def finish_module(module: AnsibleModule, manifest, out=None, **result):
    """
    finish_module writes <out>.manifest.json when out is set and exits with the manifest.
    """
    try:
        save_manifest(module, manifest, out)
    except (ConcaveLabError, OSError) as e:
        module.fail_json(msg=f'failed to write manifest for {out}: {e}', rc=1,
                         exception=traceback.format_exc())
        return
    module.exit_json(changed=bool(out), rc=manifest.rc, manifest=manifest.to_dict(), **result)
