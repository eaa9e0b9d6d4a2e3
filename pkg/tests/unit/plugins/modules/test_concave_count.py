from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import MagicMock

import ansible_collections.combinat.concave_lab.plugins.modules.concave_count as concave_count
from ansible_collections.combinat.concave_lab.plugins.module_utils.exact_enum import MAX_TABLE_N


def make_module(**params):
    module = MagicMock()
    module.params = params
    module.check_mode = False
    return module


class TestConcaveCount(unittest.TestCase):
    def setUp(self):
        self.test_fixture_dir = f"{Path(__file__).resolve().parent}/fixtures/config"

    def test_v3(self):
        module = make_module(n=3)
        concave_count.execute_module(module)
        module.fail_json.assert_not_called()
        result = module.exit_json.call_args.kwargs
        assert result['lines'][0] == 'V(3) = 13'
        assert result['lines'][1] == 'P(c = 0 | n = 3) = 0.769231'
        assert result['table']['v'] == ['0', '3', '6', '13']
        assert result['rc'] == 0
        assert result['changed'] is False

    def test_n_max_zero(self):
        module = make_module(n_max=0)
        concave_count.execute_module(module)
        result = module.exit_json.call_args.kwargs
        assert result['table']['p'] == ['1']
        assert result['table']['v'] == ['0']
        assert result['lines'] == []

    def test_asymptotic_lines(self):
        module = make_module(n=200, check_asymptotic=True)
        concave_count.execute_module(module)
        lines = module.exit_json.call_args.kwargs['lines']
        assert len(lines) == 5
        assert lines[2].startswith('V(200) / asymptotic = ')
        assert lines[4].startswith('p(200) / asymptotic = ')

    def test_enumerate(self):
        module = make_module(n=4, enumerate=True)
        concave_count.execute_module(module)
        result = module.exit_json.call_args.kwargs
        assert len(result['compositions']) == 23
        assert result['compositions'][-1] == {'minus': [], 'c': 4, 'plus': []}
        module.warn.assert_not_called()

    def test_enumerate_needs_n(self):
        module = make_module(n_max=5, enumerate=True)
        concave_count.execute_module(module)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_n_above_n_max(self):
        module = make_module(n=10, n_max=5)
        concave_count.execute_module(module)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_table_limit(self):
        module = make_module(n_max=MAX_TABLE_N + 1)
        concave_count.execute_module(module)
        module.exit_json.assert_not_called()
        assert module.fail_json.call_args.kwargs['rc'] == 2

    def test_bad_config(self):
        module = make_module(n=3, config_file=f"{self.test_fixture_dir}/unknown_key.yml")
        concave_count.execute_module(module)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_config_file(self):
        module = make_module(n=None, n_max=250, config_file=f"{self.test_fixture_dir}/valid.yml")
        concave_count.execute_module(module)
        result = module.exit_json.call_args.kwargs
        assert result['lines'][0].startswith('V(200) = ')
        assert result['manifest']['config']['n_max'] == 250

    def test_enumerate_from_config_file(self):
        module = make_module(config_file=f"{self.test_fixture_dir}/enumerate.yml")
        concave_count.execute_module(module)
        result = module.exit_json.call_args.kwargs
        assert len(result['compositions']) == 23
        assert result['manifest']['config']['bound'] == 10

    def test_bound_option_overrides_config_file(self):
        module = make_module(bound=3, config_file=f"{self.test_fixture_dir}/enumerate.yml")
        concave_count.execute_module(module)
        module.exit_json.assert_not_called()
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_csv_out(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'counts.csv')
            module = make_module(n_max=3, out=out, format='csv')
            concave_count.execute_module(module)
            result = module.exit_json.call_args.kwargs
            assert result['changed'] is True
            assert 'table' not in result
            with open(out) as f:
                assert f.read() == 'n,p,p2,v\n0,1,1,0\n1,1,2,3\n2,2,5,6\n3,3,10,13\n'
            with open(f'{out}.manifest.json') as f:
                assert json.load(f)['results']['n_max'] == 3

    def test_check_mode_writes_nothing(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'counts.json')
            module = make_module(n=3, out=out)
            module.check_mode = True
            concave_count.execute_module(module)
            assert not os.path.exists(out)
            assert module.exit_json.call_args.kwargs['table']['v'][3] == '13'
