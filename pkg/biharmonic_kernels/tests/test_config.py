import json
import os
import tempfile
import unittest

from biharmonic_kernels.src.config import RunConfig, load_run_config
from biharmonic_kernels.src.exceptions import ContractError, DomainError, HarnessError


class TestLoadRunConfig(unittest.TestCase):
    '''

    # TestLoadRunConfig
    `Defaults, then the JSON file, then the flags.`

    Test Cases
    test_flags_win_over_file

    - --tol replaces quadrature.target_tol from the file, unset flags keep the file values.

    test_unknown_keys

    - Unknown keys in the file, its sections or the overrides are contract errors.
    '''

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def _write(self, name, content):
        path = os.path.join(self.directory.name, name)
        with open(path, 'w') as file:
            file.write(content if isinstance(content, str) else json.dumps(content))
        return path

    def test_defaults(self):
        config = load_run_config()
        self.assertEqual(config, RunConfig())
        self.assertEqual(config.as_dict()['format'], 'json')

    def test_flags_win_over_file(self):
        path = self._write('run.json', {'n': 4, 'workers': 2, 'quadrature': {'target_tol': 1e-5},
                                        'options': {'pair': '0,1'}})
        config = load_run_config(path, {'n': None, 'tol': 1e-7, 'options': {'pair': '1,3'}})
        self.assertEqual(config.n, 4)
        self.assertEqual(config.quadrature.target_tol, 1e-7)
        self.assertEqual(config.quadrature.workers, 2)
        self.assertEqual(config.options, {'pair': '1,3'})

    def test_unknown_keys(self):
        with self.assertRaises(ContractError):
            load_run_config(self._write('a.json', {'dimension': 5}))
        with self.assertRaises(ContractError):
            load_run_config(self._write('b.json', {'quadrature': {'nodes': 5}}))
        with self.assertRaises(ContractError):
            load_run_config(overrides={'verbose': True})

    def test_malformed_files(self):
        with self.assertRaises(ContractError):
            load_run_config(self._write('c.json', '{"n": 5,'))
        with self.assertRaises(ContractError):
            load_run_config(self._write('d.json', '[5]'))
        with self.assertRaises(HarnessError):
            load_run_config(os.path.join(self.directory.name, 'missing.json'))

    def test_value_contracts(self):
        with self.assertRaises(DomainError):
            load_run_config(overrides={'format': 'xml'})
        with self.assertRaises(DomainError):
            load_run_config(overrides={'stencil': {'order': 3}})
        with self.assertRaises(DomainError):
            load_run_config(overrides={'seed': -1})
        with self.assertRaises(DomainError):
            load_run_config(overrides={'tol': 0.0})


if __name__ == '__main__':
    unittest.main()
