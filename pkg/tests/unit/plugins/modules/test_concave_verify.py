from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import json
import os
import tempfile
import unittest
from unittest.mock import MagicMock

import ansible_collections.combinat.concave_lab.plugins.modules.concave_verify as concave_verify


def make_module(**params):
    module = MagicMock()
    module.params = params
    module.check_mode = False
    return module


def run(**params):
    module = make_module(**params)
    concave_verify.execute_module(module)
    return module


class TestLawChoices(unittest.TestCase):
    def test_choices(self):
        assert concave_verify.law_choices() == [
            'joint-perimeter', 'length', 'local-limit', 'perimeter', 'pochhammer', 'tilt', 'weights']

    def test_get_law(self):
        law = concave_verify.get_law('local-limit', {'n': 300})
        assert law.n == 300
        assert law.samples == 0


class TestVerify(unittest.TestCase):
    def test_pochhammer(self):
        module = run(law='pochhammer', trials=200, seed=1)
        module.fail_json.assert_not_called()
        result = module.exit_json.call_args.kwargs
        assert result['rc'] == 0
        assert result['reports'][0]['test'] == 'pochhammer'
        assert result['manifest']['results']['part1_violations'] == 0
        assert result['lines'][0].endswith('PASS')

    def test_local_limit(self):
        module = run(law='local-limit', n=1000, threshold=0.1)
        module.fail_json.assert_not_called()
        reports = module.exit_json.call_args.kwargs['reports']
        assert [r['test'] for r in reports] == ['local-limit', 'mean-offset', 'variance-scale']
        assert reports[0]['detail']['closest'] == '48'

    def test_tilt(self):
        module = run(law='tilt', n=100000, samples=2000, threshold=0.1, seed=5)
        module.fail_json.assert_not_called()
        assert module.exit_json.call_args.kwargs['reports'][0]['test'] == 'tilt'

    def test_perimeter_with_exact_length(self):
        module = run(law='perimeter', n=10000, samples=3000, threshold=0.1, seed=8)
        module.fail_json.assert_not_called()
        reports = module.exit_json.call_args.kwargs['reports']
        assert [r['test'] for r in reports] == [
            'perimeter-plus', 'perimeter-minus', 'largest-part-plus', 'exact-length-plus', 'exact-length-minus']
        assert all(r['pass'] for r in reports)

    def test_failed_law(self):
        module = run(law='pochhammer', trials=50, threshold=1e-9)
        module.exit_json.assert_not_called()
        result = module.fail_json.call_args.kwargs
        assert result['rc'] == 4
        assert result['manifest']['pass'] is False

    def test_warn_only(self):
        module = run(law='pochhammer', trials=50, threshold=1e-9, warn_only=True)
        module.fail_json.assert_not_called()
        module.warn.assert_called_once()
        assert module.exit_json.call_args.kwargs['rc'] == 0

    def test_invalid_n(self):
        module = run(law='perimeter', n=-3)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_negative_seed(self):
        module = run(law='tilt', n=100, samples=10, seed=-4)
        module.exit_json.assert_not_called()
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_reports_written(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'reports.json')
            run(law='pochhammer', trials=20, out=out)
            with open(out) as f:
                assert json.load(f)[0]['n'] == 20
            with open(f'{out}.manifest.json') as f:
                assert json.load(f)['command'] == 'verify'
