from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import csv
import io
import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ansible_collections.combinat.concave_lab.plugins.module_utils.errors import (
    EXIT_OK,
    EXIT_TEST_FAILED,
    DomainError,
)

IMP_ERR = {}
try:
    import yaml
except ImportError as e:
    IMP_ERR['yaml'] = {'error': traceback.format_exc(),
                       'exception': e}
try:
    from jinja2 import Template
except ImportError as e:
    IMP_ERR['jinja2'] = {'error': traceback.format_exc(),
                         'exception': e}
try:
    from voluptuous import All, Any, Coerce, Invalid, Length, PREVENT_EXTRA, Range, Schema
except ImportError as e:
    IMP_ERR['voluptuous'] = {'error': traceback.format_exc(),
                             'exception': e}

COLLECTION_VERSION = '0.1.0'
DEFAULT_Y_GRID = '0.5:3.0:26'
# samples per worker chunk; the split never depends on the worker count
DEFAULT_CHUNK_SIZE = 2000

REPORT_TEMPLATE = """
{{ test }}: statistic={{ '%.6g' | format(statistic) }} threshold={{ '%.6g' | format(threshold) }} n={{ n }} {{ 'PASS' if passed else 'FAIL' }}
"""


def _positive_int():
    return All(Coerce(int), Range(min=1))


def config_schema():
    """
    config_schema validates a flat experiment configuration file.
    Keys match the module options; anything else is rejected.
    """
    positive_number = All(Coerce(float), Range(min=0, min_included=False))
    return Schema({
        'n': _positive_int(),
        'n_max': All(Coerce(int), Range(min=0)),
        'samples': _positive_int(),
        'seed': All(Coerce(int), Range(min=0)),
        'stream': All(Coerce(int), Range(min=0)),
        'tail_eps': All(Coerce(float), Range(min=0, max=1, min_included=False, max_included=False)),
        'threshold': positive_number,
        'trials': _positive_int(),
        'bound': _positive_int(),
        'budget': _positive_int(),
        'uniform_max_n': _positive_int(),
        'out': str,
        'format': Any('json', 'csv'),
        'workers': _positive_int(),
        'law': Any('perimeter', 'joint-perimeter', 'tilt', 'length', 'local-limit', 'weights', 'pochhammer'),
        'mode': Any('uniform', 'boltzmann'),
        'stats': bool,
        'check_asymptotic': bool,
        'enumerate': bool,
        'warn_only': bool,
        'partition_mode': bool,
        'aggregate': Any('median', 'per-sample'),
        'y_grid': Any(str, All([Coerce(float)], Length(min=1))),
        'from_parts': Any(str, [Coerce(int)]),
    }, extra=PREVENT_EXTRA)


def load_config(path):
    """
    load_config reads a YAML mapping of option values and validates it.
    :param path: path of the config file, or None
    :return: dict of validated values (empty when path is None)
    """
    if not path:
        return {}
    if not os.path.isfile(path):
        raise DomainError(f"config file {path} does not exist")
    with open(path, 'r') as f:
        data = yaml.safe_load(f)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DomainError(f"config file {path} must hold a mapping, got {type(data).__name__}")
    try:
        return config_schema()(data)
    except Invalid as e:
        raise DomainError(f"invalid config file {path}: {e}") from e


def resolve_params(params, config, defaults):
    """
    resolve_params merges option values: explicit options (not None) win over the
    config file, which wins over the built-in defaults.
    :return: (resolved dict, list of config keys shadowed by explicit options)
    """
    resolved = dict(defaults)
    resolved.update(config)
    shadowed = []
    for key, value in params.items():
        if key == 'config_file' or value is None:
            continue
        if key in config and config[key] != value:
            shadowed.append(key)
        resolved[key] = value
    return resolved, shadowed


def parse_grid(spec):
    """
    parse_grid accepts a list of heights or 'start:stop:count' and returns a sorted list of floats.
    """
    if isinstance(spec, str):
        pieces = spec.split(':')
        if len(pieces) != 3:
            raise DomainError(f"grid {spec} must be start:stop:count")
        try:
            start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        except ValueError as e:
            raise DomainError(f"grid {spec} must be start:stop:count") from e
        if count < 1:
            raise DomainError(f"grid {spec} needs at least one point")
        if count == 1:
            return [start]
        step = (stop - start) / (count - 1)
        return [start + i * step for i in range(count)]
    return sorted(float(v) for v in spec)


def parse_parts(spec):
    if isinstance(spec, str):
        try:
            return [int(v) for v in spec.split(',') if v.strip()]
        except ValueError as e:
            raise DomainError(f"from_parts {spec} must be a comma separated list of integers") from e
    return [int(v) for v in spec]


@dataclass
class RunManifest:
    """
    RunManifest records one module run: the resolved configuration, the collection
    version, the elapsed wall-clock, every test report and the exit status.
    """
    command: str
    config: dict
    version: str = COLLECTION_VERSION
    wall_clock: float = 0.0
    reports: list = field(default_factory=list)
    rc: int = EXIT_OK
    results: dict = field(default_factory=dict)
    started: float = field(default_factory=time.monotonic, repr=False)

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    def add_report(self, report):
        self.reports.append(report)
        return report

    def finish(self, rc=None):
        self.wall_clock = time.monotonic() - self.started
        if rc is None:
            rc = EXIT_OK if self.passed else EXIT_TEST_FAILED
        self.rc = rc
        return self

    def to_dict(self):
        return {
            'command': self.command,
            'config': self.config,
            'version': self.version,
            'wall_clock': self.wall_clock,
            'reports': [r.to_dict() for r in self.reports],
            'pass': self.passed,
            'rc': self.rc,
            'results': self.results,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def render_report_lines(reports):
    template = Template(REPORT_TEMPLATE)
    return [template.render(test=r.test, statistic=r.statistic, threshold=r.threshold,
                            n=r.n_samples, passed=r.passed).strip() for r in reports]


def render_lines(template_text, rows):
    template = Template(template_text)
    return [template.render(**row).strip() for row in rows]


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise DomainError(f"output directory {parent} does not exist")


def write_text(path, text):
    """write_text writes text with exactly one trailing newline."""
    _ensure_parent(path)
    with open(path, 'w', newline='\n') as f:
        f.write(text.rstrip('\n') + '\n')
    return path


def dump_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def write_json(path, data):
    return write_text(path, json.dumps(data, sort_keys=True, indent=2))


def write_json_lines(path, rows):
    return write_text(path, '\n'.join(dump_json(row) for row in rows))


def csv_value(value):
    # repr keeps '.' as the decimal point whatever the locale
    if isinstance(value, float):
        return repr(value)
    return value


def format_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=',', lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([csv_value(v) for v in row])
    return buffer.getvalue()


def write_csv(path, header, rows):
    return write_text(path, format_csv(header, rows))


def manifest_path(out):
    return f"{out}.manifest.json"


def write_manifest(out, manifest):
    return write_text(manifest_path(out), manifest.to_json())


def chunk_counts(total, chunk_size=DEFAULT_CHUNK_SIZE):
    if total < 1:
        raise DomainError(f"sample count must be >= 1, got {total}")
    counts = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        counts.append(total % chunk_size)
    return counts


def _run_chunk(task, args, rng_seed, index, count):
    return task(args, count, rng_seed.generator(chunk=index))


def run_chunks(task, args, total, rng_seed, workers=1, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    run_chunks splits total draws into fixed-size chunks; chunk i draws from the
    substream rng_seed.generator(chunk=i). Results come back in chunk order, so the
    output is the same for any number of workers.
    :param task: picklable top-level callable task(args, count, generator)
    :return: list of per-chunk results
    """
    counts = chunk_counts(total, chunk_size)
    indexes = list(range(len(counts)))
    if workers <= 1 or len(counts) == 1:
        return [_run_chunk(task, args, rng_seed, i, c) for i, c in zip(indexes, counts)]
    with ProcessPoolExecutor(max_workers=min(workers, len(counts))) as executor:
        return list(executor.map(_run_chunk, [task] * len(counts), [args] * len(counts),
                                 [rng_seed] * len(counts), indexes, counts))
