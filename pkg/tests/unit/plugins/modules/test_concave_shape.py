from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import os
import tempfile
import unittest
from unittest.mock import MagicMock

import ansible_collections.combinat.concave_lab.plugins.modules.concave_shape as concave_shape

PARTS_54 = '8,6,6,3,2,1,1,1,0,1,1,1,2,5,5,5,6'


def make_module(**params):
    module = MagicMock()
    module.params = params
    module.check_mode = False
    return module


def run(**params):
    module = make_module(**params)
    concave_shape.execute_module(module)
    return module


class TestFromParts(unittest.TestCase):
    def test_composition_of_54(self):
        module = run(from_parts=PARTS_54)
        module.fail_json.assert_not_called()
        result = module.exit_json.call_args.kwargs
        assert len(result['deviation']['per_sample']) == 1
        assert result['lines'] == []
        series = [row[2] for row in result['profile']]
        assert series.count('profile') == 32
        assert series.count('limit_plus') == 26
        assert series.count('limit_minus') == 26
        assert all(row[3] == 0 for row in result['profile'])

    def test_list_input(self):
        module = run(from_parts=[3, 1, 2, 2], y_grid=[1.0, 0.5])
        result = module.exit_json.call_args.kwargs
        assert [row[1] for row in result['profile'] if row[2] == 'limit_plus'] == [0.5, 1.0]

    def test_ambiguous_parts(self):
        module = run(from_parts='1,2,1,2')
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_size_mismatch(self):
        module = run(from_parts=PARTS_54, n=50)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_non_positive_grid(self):
        module = run(from_parts=PARTS_54, y_grid='0:1:3')
        assert module.fail_json.call_args.kwargs['rc'] == 5


class TestSampledShapes(unittest.TestCase):
    def test_limit_shape(self):
        module = run(n=20000, samples=5, seed=12, threshold=0.35)
        module.fail_json.assert_not_called()
        result = module.exit_json.call_args.kwargs
        assert result['lines'][0].startswith('limit-shape: ')
        assert len(result['deviation']['per_sample']) == 5
        assert len(result['profile']) == 4 * 26
        assert result['manifest']['reports'][0]['pass'] is True

    def test_partition_mode(self):
        module = run(n=20000, samples=3, seed=1, partition_mode=True, threshold=0.5)
        module.fail_json.assert_not_called()
        result = module.exit_json.call_args.kwargs
        assert result['lines'][0].startswith('temperley-shape: ')
        assert len(result['profile']) == 2 * 26

    def test_threshold_failure(self):
        module = run(n=2000, samples=2, seed=3, threshold=1e-6)
        module.exit_json.assert_not_called()
        result = module.fail_json.call_args.kwargs
        assert result['rc'] == 4
        assert result['lines'][0].endswith('FAIL')

    def test_missing_n(self):
        module = run(samples=3)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_csv_out(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'profile.csv')
            module = run(n=5000, samples=2, seed=4, threshold=1.0, aggregate='per-sample', out=out)
            assert module.exit_json.call_args.kwargs['changed'] is True
            with open(out) as f:
                assert f.readline() == 'x,y,series,sample\n'
            assert os.path.exists(f'{out}.manifest.json')
