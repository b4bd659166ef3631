import json
import os
import tempfile
import unittest

from click.testing import CliRunner

from biharmonic_kernels.CLI_handler.evaluation.evaluation_cli import bubble_check, green_eval, kernel_eval, solve
from biharmonic_kernels.CLI_handler.verification.verify_cli import verify


class TestEvaluationCli(unittest.TestCase):
    '''

    # TestEvaluationCli
    `Exit codes and printed values of the evaluation commands.`

    Test Cases
    test_kernel_eval

    - P_0 at (0, 0, 0, 0, 1) for n = 4 prints 0.379954 and exits 0.

    test_ill_posed_pair

    - (0,3) is rejected through handle_exception with exit code 1.
    '''

    def setUp(self):
        self.runner = CliRunner()

    def test_kernel_eval(self):
        result = self.runner.invoke(kernel_eval, ['--k', '0', '--n', '4', '--point', '0,0,0,0,1'])
        self.assertEqual(result.exit_code, 0, msg=result.output)
        self.assertIn('0.379954', result.output)

    def test_unknown_flag(self):
        result = self.runner.invoke(kernel_eval, ['--k', '0', '--point', '0,0,0,0,0,1', '--bogus'])
        self.assertEqual(result.exit_code, 2)

    def test_ill_posed_pair(self):
        result = self.runner.invoke(green_eval, ['--pair', '0,3', '--n', '4', '--point', '0,0,0,0,1',
                                                 '--source', '0,0,0,0,2'])
        self.assertEqual(result.exit_code, 1)
        self.assertIn('ContractError', result.output)

    def test_solve_constant_data(self):
        result = self.runner.invoke(solve, ['--pair', '0,2', '--n', '4', '--f-i', 'constant:1',
                                            '--point', '0,0,0,0,1'])
        self.assertEqual(result.exit_code, 0, msg=result.output)

    def test_bubble_check(self):
        result = self.runner.invoke(bubble_check, ['--pair', '1,3', '--n', '5', '--samples', '2'])
        self.assertEqual(result.exit_code, 0, msg=result.output)


class TestVerifyCli(unittest.TestCase):
    '''

    # TestVerifyCli
    `verify <suite> writes its report where -o points.`
    '''

    def test_verify_geometry(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'geometry.json')
            result = CliRunner().invoke(verify, ['geometry', '--n', '5', '-o', path])
            self.assertEqual(result.exit_code, 0, msg=result.output)
            with open(path) as file:
                document = json.load(file)
        self.assertEqual(document['suite'], 'geometry')
        self.assertEqual(document['config']['n'], 5)

    def test_unknown_suite(self):
        self.assertEqual(CliRunner().invoke(verify, ['topology']).exit_code, 2)


if __name__ == '__main__':
    unittest.main()
