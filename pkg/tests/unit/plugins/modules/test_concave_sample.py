from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

import json
import os
import tempfile
import unittest
from unittest.mock import MagicMock

import ansible_collections.combinat.concave_lab.plugins.modules.concave_sample as concave_sample


def make_module(**params):
    module = MagicMock()
    module.params = params
    module.check_mode = False
    return module


def run(**params):
    module = make_module(**params)
    concave_sample.execute_module(module)
    return module


class TestUniformSampling(unittest.TestCase):
    def test_deterministic(self):
        first = run(n=8, samples=5, seed=3).exit_json.call_args.kwargs['samples']
        second = run(n=8, samples=5, seed=3).exit_json.call_args.kwargs['samples']
        assert first == second
        for row in first:
            assert sum(row['minus']) + sum(row['plus']) == 8
            assert row['c'] == 0
            assert row['trials'] >= 1

    def test_budget_exhausted(self):
        module = run(n=60, samples=50, seed=1, budget=1)
        module.exit_json.assert_not_called()
        result = module.fail_json.call_args.kwargs
        assert result['rc'] == 3
        assert result['trials'] >= 1
        assert result['manifest']['rc'] == 3

    def test_above_uniform_limit(self):
        module = run(n=20001)
        assert module.fail_json.call_args.kwargs['rc'] == 3

    def test_missing_n(self):
        module = run(samples=2)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_invalid_samples(self):
        module = run(n=5, samples=0)
        assert module.fail_json.call_args.kwargs['rc'] == 5

    def test_negative_seed(self):
        for params in ({'seed': -1}, {'stream': -2}):
            module = run(n=5, samples=1, **params)
            module.exit_json.assert_not_called()
            assert module.fail_json.call_args.kwargs['rc'] == 5


class TestBoltzmannSampling(unittest.TestCase):
    def test_stats(self):
        module = run(n=100, samples=4, mode='boltzmann', stats=True, seed=2)
        rows = module.exit_json.call_args.kwargs['samples']
        assert len(rows) == 4
        for row in rows:
            stats = row['stats']
            assert stats['c'] == 0
            assert stats['size_minus'] + stats['size_plus'] == row['size']
            assert row['n'] == 100

    def test_workers_do_not_change_samples(self):
        first = run(n=50, samples=6, mode='boltzmann', seed=4).exit_json.call_args.kwargs['samples']
        second = run(n=50, samples=6, mode='boltzmann', seed=4, workers=3).exit_json.call_args.kwargs['samples']
        assert first == second


class TestOutput(unittest.TestCase):
    def test_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'samples.csv')
            module = run(n=10, samples=3, seed=5, out=out, format='csv')
            result = module.exit_json.call_args.kwargs
            assert result['changed'] is True
            assert 'samples' not in result
            with open(out) as f:
                lines = f.read().splitlines()
            assert lines[0] == 'size,len_minus,len_plus,length,tilt,largest_part,half_perimeter'
            assert len(lines) == 4
            assert all(line.startswith('10,') for line in lines[1:])
            assert os.path.exists(f'{out}.manifest.json')

    def test_json_lines(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'samples.jsonl')
            run(n=6, samples=2, seed=5, out=out)
            with open(out) as f:
                rows = [json.loads(line) for line in f.read().splitlines()]
            assert len(rows) == 2
            for row in rows:
                assert row['n'] == 6
                assert {'trials', 'minus', 'plus'} <= set(row)
                assert sum(row['minus']) + sum(row['plus']) == 6
